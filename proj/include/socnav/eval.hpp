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

#ifndef SOCNAV_EVAL_HPP_
#define SOCNAV_EVAL_HPP_

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "socnav/world.hpp"

namespace socnav {

struct EmptyRun : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Social individual index: Gaussian in the robot-person distance with sigma = r_p / 2.
template <typename Scalar>
Scalar sii(const Eigen::Matrix<Scalar, 2, 1>& robot, const Eigen::Matrix<Scalar, 2, 1>& person,
           Scalar r_p) {
  const Scalar sigma = r_p / Scalar{2};
  return std::exp(-(robot - person).squaredNorm() / (Scalar{2} * sigma * sigma));
}

/// SII at d = r_p, so that sii > threshold exactly when d < r_p.
inline double sii_threshold() { return std::exp(-2.0); }

inline bool physical_violation(double d, double robot_r, double person_r) {
  return d < robot_r + person_r;
}

inline bool physiological_violation(double d, double r_p) { return d < r_p; }

double path_length(std::span<const Pose2D> poses);

struct PersonSafety {
  int person_id{0};
  double distance{0.0};
  double sii{0.0};
  double sii_threshold{0.0};
  bool physical_violation{false};
  bool physiological_violation{false};
};

struct SafetyRecord {
  double t{0.0};
  std::vector<PersonSafety> people;
};

/// Safety of every pedestrian against the robot, judged with each person's true emotion radius.
SafetyRecord evaluate_safety(double t, const Vector2& robot, double robot_radius,
                             std::span<const Pedestrian> peds);

struct PersonSummary {
  int id{0};
  double min_distance{0.0};
  double sii_peak{0.0};
  int physiological_violation_steps{0};
  int physical_violation_steps{0};
};

struct RunSummary {
  bool success{false};
  double path_length{0.0};
  double duration{0.0};
  std::vector<PersonSummary> people;
  double sii_peak{0.0};
  int physiological_violation_steps{0};  // timesteps with at least one violated person
  int physical_violation_steps{0};
};

/// Aggregates a time-ordered record stream; success means the last pose is within goal tolerance.
RunSummary summarize_run(std::span<const SafetyRecord> records, std::span<const Pose2D> poses,
                         const Scenario& scenario);

/// Metrics document with a fixed key order.
std::string metrics_json(const RunSummary& summary);

}  // namespace socnav

#endif  // SOCNAV_EVAL_HPP_
