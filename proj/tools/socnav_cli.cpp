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

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "socnav/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = socnav::cli;

  CLI::App app{"Emotion-aware social navigation simulator"};
  app.require_subcommand(1);

  cli::Options opts;
  std::string out_dir;
  std::uint64_t seed = 0;
  double dt = 0.0;
  const std::map<std::string, cli::Adaptation> adaptation_names{
      {"on", cli::Adaptation::On}, {"off", cli::Adaptation::Off}, {"both", cli::Adaptation::Both}};

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", out_dir, "Output directory (default: $SOCNAV_OUT or socnav_out)");
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--dt", dt, "Override the simulation step [s]")->check(CLI::PositiveNumber);
    sub->add_flag("--no-plots", opts.no_plots, "Write CSV and JSON only");
  };

  std::string scenario;
  std::string dir;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario, "Scenario JSON file")->required();
  add_common(run);
  run->add_option("--adaptation", opts.adaptation, "Emotion adaptation: on, off or both")
      ->transform(CLI::CheckedTransformer(adaptation_names, CLI::ignore_case));
  run->add_flag("--dump-scan", opts.dump_scan, "Also write the first laser scan as CSV");

  auto* compare = app.add_subcommand("compare", "Run with adaptation on and off and compare");
  compare->add_option("scenario", scenario, "Scenario JSON file")->required();
  add_common(compare);

  auto* batch = app.add_subcommand("batch", "Run every scenario file in a directory");
  batch->add_option("dir", dir, "Directory of scenario JSON files")->required();
  add_common(batch);
  batch->add_option("--adaptation", opts.adaptation, "Emotion adaptation: on, off or both")
      ->transform(CLI::CheckedTransformer(adaptation_names, CLI::ignore_case));
  batch->add_option("-j,--parallelism", opts.parallelism, "Scenarios run concurrently")
      ->check(CLI::PositiveNumber);
  batch->add_flag("--dump-scan", opts.dump_scan, "Also write each first laser scan as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitSuccess : cli::kExitUsage;
  }

  for (auto* sub : {run, compare, batch}) {
    if (sub->parsed()) {
      if (sub->count("--seed") > 0) {
        opts.seed = seed;
      }
      if (sub->count("--dt") > 0) {
        opts.dt = dt;
      }
    }
  }
  opts.out_dir = out_dir.empty() ? cli::default_out_dir() : std::filesystem::path(out_dir);

  if (run->parsed()) {
    return cli::cmd_run(scenario, opts, std::cerr);
  }
  if (compare->parsed()) {
    return cli::cmd_compare(scenario, opts, std::cerr);
  }
  return cli::cmd_batch(dir, opts, std::cerr);
}
