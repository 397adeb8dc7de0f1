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

#include "socnav/eval.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include <json.hpp>

namespace socnav {

double path_length(std::span<const Pose2D> poses) {
  double total = 0.0;
  for (std::size_t i = 1; i < poses.size(); ++i) {
    total += (poses[i].position - poses[i - 1].position).norm();
  }
  return total;
}

SafetyRecord evaluate_safety(double t, const Vector2& robot, double robot_radius,
                             std::span<const Pedestrian> peds) {
  SafetyRecord rec{t, {}};
  rec.people.reserve(peds.size());
  for (const auto& p : peds) {
    const double r_p = proxemic_radius(p.emotion);
    const double d = (robot - p.pose.position).norm();
    rec.people.push_back({p.id, d, sii(robot, p.pose.position, r_p), sii_threshold(),
                          physical_violation(d, robot_radius, p.body_radius),
                          physiological_violation(d, r_p)});
  }
  return rec;
}

RunSummary summarize_run(std::span<const SafetyRecord> records, std::span<const Pose2D> poses,
                         const Scenario& scenario) {
  if (records.empty() || poses.empty()) {
    throw EmptyRun("summarize_run: no timesteps recorded");
  }
  RunSummary s;
  s.path_length = path_length(poses);
  s.duration = records.back().t - records.front().t;
  s.success = (poses.back().position - scenario.goal).norm() <= scenario.goal_tolerance;

  std::map<int, std::size_t> slot;
  for (const auto& rec : records) {
    bool physio = false;
    bool physical = false;
    for (const auto& p : rec.people) {
      auto [it, inserted] = slot.try_emplace(p.person_id, s.people.size());
      if (inserted) {
        s.people.push_back({p.person_id, std::numeric_limits<double>::infinity(), 0.0, 0, 0});
      }
      PersonSummary& ps = s.people[it->second];
      ps.min_distance = std::min(ps.min_distance, p.distance);
      ps.sii_peak = std::max(ps.sii_peak, p.sii);
      ps.physiological_violation_steps += p.physiological_violation ? 1 : 0;
      ps.physical_violation_steps += p.physical_violation ? 1 : 0;
      physio = physio || p.physiological_violation;
      physical = physical || p.physical_violation;
      s.sii_peak = std::max(s.sii_peak, p.sii);
    }
    s.physiological_violation_steps += physio ? 1 : 0;
    s.physical_violation_steps += physical ? 1 : 0;
  }
  return s;
}

std::string metrics_json(const RunSummary& summary) {
  nlohmann::ordered_json doc;
  doc["success"] = summary.success;
  doc["path_length_m"] = summary.path_length;
  doc["duration_s"] = summary.duration;
  doc["per_person"] = nlohmann::ordered_json::array();
  for (const auto& p : summary.people) {
    nlohmann::ordered_json entry;
    entry["id"] = p.id;
    entry["min_distance_m"] = p.min_distance;
    entry["sii_peak"] = p.sii_peak;
    entry["physiological_violation_steps"] = p.physiological_violation_steps;
    entry["physical_violation_steps"] = p.physical_violation_steps;
    doc["per_person"].push_back(std::move(entry));
  }
  doc["sii_threshold"] = sii_threshold();
  return doc.dump(2) + "\n";
}

}  // namespace socnav
