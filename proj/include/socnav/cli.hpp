// Copyright 2026 The socnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOCNAV_CLI_HPP_
#define SOCNAV_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "socnav/controller.hpp"

namespace socnav::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRunFailed = 2;

enum class Adaptation { Scenario, On, Off, Both };

struct Options {
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  bool no_plots{false};
  bool dump_scan{false};
  Adaptation adaptation{Adaptation::Scenario};
  int parallelism{1};
  ControllerConfig controller;
};

/// `SOCNAV_OUT` when set and non-empty, else "socnav_out".
std::filesystem::path default_out_dir();

/// Writes to a sibling temp file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Files written by one run.
struct OutputBundle {
  std::filesystem::path trajectory_csv;
  std::filesystem::path metrics_json;
  std::optional<std::filesystem::path> path_svg;
  std::optional<std::filesystem::path> sii_svg;
  std::optional<std::filesystem::path> scan_csv;
};

/// Scan dump: beam_index, angle, range.
std::string scan_csv(const LaserScan& scan);

/// Loads a scenario and applies --seed and --dt.
Scenario load_with_overrides(const std::filesystem::path& file, const Options& opts);

/// Runs one scenario and writes its artifacts. Each command returns its process exit code and
/// reports diagnostics on `err`.
int cmd_run(const std::filesystem::path& scenario_file, const Options& opts, std::ostream& err);

int cmd_compare(const std::filesystem::path& scenario_file, const Options& opts,
                std::ostream& err);

/// Runs every *.json scenario in `dir`; writes per-scenario artifacts and summary.csv with one
/// row per scenario (two with --adaptation both) in filename order.
int cmd_batch(const std::filesystem::path& dir, const Options& opts, std::ostream& err);

}  // namespace socnav::cli

#endif  // SOCNAV_CLI_HPP_
