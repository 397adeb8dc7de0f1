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

#include "socnav/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

#include <unistd.h>

#include "socnav/svg.hpp"

namespace socnav::cli {

namespace fs = std::filesystem;

namespace {

struct Mode {
  const char* name;
  bool adaptation;
};

std::vector<Mode> modes_for(Adaptation a, bool scenario_default) {
  switch (a) {
    case Adaptation::On:
      return {{"on", true}};
    case Adaptation::Off:
      return {{"off", false}};
    case Adaptation::Both:
      return {{"on", true}, {"off", false}};
    case Adaptation::Scenario:
      break;
  }
  return {{scenario_default ? "on" : "off", scenario_default}};
}

struct RunOutcome {
  std::optional<RunResult> result;
  std::string error;
  bool usage_error{false};  // unreadable or invalid scenario, or an IO failure
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (const char c : s) {
    out += c;
    if (c == '"') {
      out += '"';
    }
  }
  return out + "\"";
}

// Writes the run bundle under `stem`; returns the paths written.
OutputBundle write_bundle(const fs::path& out_dir, const std::string& stem,
                          const Scenario& scenario, const RunResult& r, const Options& opts) {
  OutputBundle b;
  b.trajectory_csv = out_dir / (stem + "_trajectory.csv");
  b.metrics_json = out_dir / (stem + "_metrics.json");
  write_atomic(b.trajectory_csv, trajectory_csv(r.log));
  write_atomic(b.metrics_json, metrics_json(r.summary));
  if (!opts.no_plots) {
    b.path_svg = out_dir / (stem + "_path.svg");
    b.sii_svg = out_dir / (stem + "_sii.svg");
    const std::string label = std::string("adaptation ") +
                              (scenario.adaptation_enabled ? "on" : "off");
    write_atomic(*b.path_svg,
                 path_plot_svg(scenario, {{label, &r.log, scenario.adaptation_enabled}}));
    write_atomic(*b.sii_svg, sii_plot_svg({{label, &r.log}}));
  }
  if (opts.dump_scan) {
    b.scan_csv = out_dir / (stem + "_scan.csv");
    write_atomic(*b.scan_csv, scan_csv(r.log.initial_scan));
  }
  return b;
}

RunOutcome execute(const Scenario& scenario, const Options& opts) {
  RunOutcome o;
  try {
    o.result = run(scenario, opts.controller);
  } catch (const PlanningFailed& e) {
    o.error = e.what();
  } catch (const std::exception& e) {
    o.error = e.what();
    o.usage_error = true;
  }
  return o;
}

}  // namespace

fs::path default_out_dir() {
  const char* env = std::getenv("SOCNAV_OUT");
  if (env != nullptr && *env != '\0') {
    return env;
  }
  return "socnav_out";
}

void write_atomic(const fs::path& path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  fs::create_directories(dir);
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." +
                              std::to_string(::getpid()) + "." + std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw fs::filesystem_error("cannot open for writing", tmp,
                                 std::make_error_code(std::errc::io_error));
    }
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw fs::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
    }
  }
  fs::rename(tmp, path);
}

std::string scan_csv(const LaserScan& scan) {
  std::string out = "beam_index,angle,range\n";
  char line[96];
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    std::snprintf(line, sizeof(line), "%zu,%.6f,%.6f\n", i,
                  scan.config.beam_angle(static_cast<int>(i)), scan.ranges[i]);
    out += line;
  }
  return out;
}

Scenario load_with_overrides(const fs::path& file, const Options& opts) {
  Scenario s = load_scenario_file(file.string());
  if (opts.seed) {
    s.seed = *opts.seed;
  }
  if (opts.dt) {
    s.sim_dt = *opts.dt;
    validate(s);
  }
  return s;
}

int cmd_run(const fs::path& scenario_file, const Options& opts, std::ostream& err) {
  Scenario base;
  try {
    base = load_with_overrides(scenario_file, opts);
  } catch (const std::exception& e) {
    err << "socnav: cannot load scenario " << scenario_file.string() << ": " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string stem = scenario_file.stem().string();
  const auto modes = modes_for(opts.adaptation, base.adaptation_enabled);
  int code = kExitSuccess;
  for (const auto& mode : modes) {
    Scenario s = base;
    s.adaptation_enabled = mode.adaptation;
    const std::string name = modes.size() > 1 ? stem + "_" + mode.name : stem;
    const RunOutcome o = execute(s, opts);
    if (!o.result) {
      err << "socnav: " << scenario_file.string() << ": " << o.error << "\n";
      return o.usage_error ? kExitUsage : kExitRunFailed;
    }
    try {
      write_bundle(opts.out_dir, name, s, *o.result, opts);
    } catch (const std::exception& e) {
      err << "socnav: cannot write outputs to " << opts.out_dir.string() << ": " << e.what()
          << "\n";
      return kExitUsage;
    }
    if (!o.result->summary.success) {
      err << "socnav: " << scenario_file.string() << " (adaptation " << mode.name
          << "): goal not reached within " << s.max_sim_time << " s\n";
      code = kExitRunFailed;
    }
  }
  return code;
}

int cmd_compare(const fs::path& scenario_file, const Options& opts, std::ostream& err) {
  Scenario s;
  try {
    s = load_with_overrides(scenario_file, opts);
  } catch (const std::exception& e) {
    err << "socnav: cannot load scenario " << scenario_file.string() << ": " << e.what() << "\n";
    return kExitUsage;
  }
  PairComparison cmp;
  try {
    cmp = run_pair(s, opts.controller);
  } catch (const PlanningFailed& e) {
    err << "socnav: " << scenario_file.string() << ": " << e.what() << "\n";
    return kExitRunFailed;
  } catch (const std::exception& e) {
    err << "socnav: " << scenario_file.string() << ": " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string stem = scenario_file.stem().string();
  try {
    write_atomic(opts.out_dir / (stem + "_comparison.json"), comparison_json(cmp));
    if (!opts.no_plots) {
      write_atomic(opts.out_dir / (stem + "_sii_compare.svg"),
                   sii_plot_svg({{"known emotion", &cmp.known.log},
                                 {"unknown emotion", &cmp.unknown.log}}));
      write_atomic(opts.out_dir / (stem + "_path_compare.svg"),
                   path_plot_svg(s, {{"known emotion", &cmp.known.log, true},
                                     {"unknown emotion", &cmp.unknown.log, false}}));
    }
  } catch (const std::exception& e) {
    err << "socnav: cannot write outputs to " << opts.out_dir.string() << ": " << e.what()
        << "\n";
    return kExitUsage;
  }
  if (!cmp.known.summary.success || !cmp.unknown.summary.success) {
    err << "socnav: " << scenario_file.string() << ": goal not reached in at least one run\n";
    return kExitRunFailed;
  }
  return kExitSuccess;
}

int cmd_batch(const fs::path& dir, const Options& opts, std::ostream& err) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".json") {
      files.push_back(it->path());
    }
  }
  if (ec) {
    err << "socnav: cannot read directory " << dir.string() << ": " << ec.message() << "\n";
    return kExitUsage;
  }
  if (files.empty()) {
    err << "socnav: no scenario files (*.json) in " << dir.string() << "\n";
    return kExitUsage;
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });

  struct Row {
    std::string file;
    std::string adaptation;
    std::string status;
    std::optional<RunSummary> summary;
    std::string error;
  };
  // Rows are produced per file into fixed slots, so the summary never depends on scheduling.
  std::vector<std::vector<Row>> rows(files.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const std::string name = files[i].filename().string();
      const std::string stem = files[i].stem().string();
      Scenario base;
      try {
        base = load_with_overrides(files[i], opts);
      } catch (const std::exception& e) {
        rows[i].push_back({name, "", "error", std::nullopt, e.what()});
        continue;
      }
      const auto modes = modes_for(opts.adaptation, base.adaptation_enabled);
      for (const auto& mode : modes) {
        Scenario s = base;
        s.adaptation_enabled = mode.adaptation;
        const RunOutcome o = execute(s, opts);
        if (!o.result) {
          rows[i].push_back({name, mode.name, "error", std::nullopt, o.error});
          continue;
        }
        Row row{name, mode.name, o.result->summary.success ? "success" : "failure",
                o.result->summary, ""};
        try {
          write_bundle(opts.out_dir, modes.size() > 1 ? stem + "_" + mode.name : stem, s,
                       *o.result, opts);
        } catch (const std::exception& e) {
          row.status = "error";
          row.error = e.what();
        }
        rows[i].push_back(std::move(row));
      }
    }
  };
  const int n_threads = std::clamp<int>(opts.parallelism, 1, static_cast<int>(files.size()));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < n_threads; ++t) {
      pool.emplace_back(worker);
    }
    worker();
  }

  std::string csv =
      "file,adaptation,status,success,path_length_m,duration_s,sii_peak,min_distance_m,"
      "physiological_violation_steps,physical_violation_steps,error\n";
  bool all_ok = true;
  char buf[256];
  for (const auto& per_file : rows) {
    for (const auto& row : per_file) {
      all_ok = all_ok && row.status == "success";
      csv += csv_field(row.file) + "," + row.adaptation + "," + row.status + ",";
      if (row.summary) {
        const RunSummary& s = *row.summary;
        // Without pedestrians the distance column is left empty.
        std::string min_distance;
        if (!s.people.empty()) {
          const auto nearest = std::ranges::min_element(
              s.people, {}, [](const PersonSummary& p) { return p.min_distance; });
          std::snprintf(buf, sizeof(buf), "%.6f", nearest->min_distance);
          min_distance = buf;
        }
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%s,%d,%d,", s.success ? "1" : "0",
                      s.path_length, s.duration, s.sii_peak, min_distance.c_str(),
                      s.physiological_violation_steps, s.physical_violation_steps);
        csv += buf;
      } else {
        csv += ",,,,,,,";
      }
      csv += csv_field(row.error) + "\n";
      if (row.status == "error") {
        err << "socnav: " << row.file << ": " << row.error << "\n";
      }
    }
  }
  try {
    write_atomic(opts.out_dir / "summary.csv", csv);
  } catch (const std::exception& e) {
    err << "socnav: cannot write outputs to " << opts.out_dir.string() << ": " << e.what()
        << "\n";
    return kExitUsage;
  }
  return all_ok ? kExitSuccess : kExitRunFailed;
}

}  // namespace socnav::cli
