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

#ifndef SOCNAV_CONTROLLER_HPP_
#define SOCNAV_CONTROLLER_HPP_

#include <string>
#include <vector>

#include "socnav/costmap.hpp"
#include "socnav/eval.hpp"
#include "socnav/planning.hpp"
#include "socnav/sensing.hpp"
#include "socnav/world.hpp"

namespace socnav {

struct PlanningFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ControllerConfig {
  ScanConfig scan;
  LayerParams layers;
  DWAConfig dwa;
  double local_window{3.0};
  double replan_period{1.0};
  int recovery_replan_count{2};
  double emotion_association_radius{0.5};
  double static_clearance{0.1};  // detections closer than this to a map obstacle are dropped
};

struct RunLog {
  std::vector<double> times;
  std::vector<Pose2D> poses;
  std::vector<Velocity> commands;
  std::vector<std::vector<PersonDetection>> detections;
  std::vector<SafetyRecord> safety;
  std::vector<double> replan_events;
  GlobalPath initial_path;
  LaserScan initial_scan;
};

struct RunResult {
  RunLog log;
  RunSummary summary;
};

/// Emotion of the nearest ground-truth pedestrian within `radius` of the detection, else Neutral.
Emotion associate_emotion(const PersonDetection& det, std::span<const Pedestrian> peds,
                          double radius);

/// Drops detections lying within `clearance` of an occupied map cell (wall fragments).
std::vector<PersonDetection> filter_static_detections(std::vector<PersonDetection> detections,
                                                      const GridMap& map, double clearance);

/// Sense, detect, compose costmaps, plan and act at every sim_dt until the goal or max_sim_time.
RunResult run(const Scenario& scenario, const ControllerConfig& cfg = {});

struct PairComparison {
  RunResult known;    // adaptation enabled
  RunResult unknown;  // adaptation disabled
  double delta_path_length{0.0};
  double delta_duration{0.0};
  double delta_sii_peak{0.0};
  int delta_physiological_violation_steps{0};
  int delta_physical_violation_steps{0};
  std::vector<double> delta_min_distance;  // per person, known minus unknown
};

/// Runs the scenario with adaptation forced on, then off; deltas are known minus unknown.
PairComparison run_pair(const Scenario& scenario, const ControllerConfig& cfg = {});

/// One row per timestep: t, x, y, theta, v, w, min_person_distance, sii_max (6 decimals).
std::string trajectory_csv(const RunLog& log);

std::string comparison_json(const PairComparison& cmp);

}  // namespace socnav

#endif  // SOCNAV_CONTROLLER_HPP_
