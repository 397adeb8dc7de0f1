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

#include "socnav/controller.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <limits>

#include <json.hpp>

namespace socnav {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

}  // namespace

Emotion associate_emotion(const PersonDetection& det, std::span<const Pedestrian> peds,
                          double radius) {
  const Pedestrian* nearest = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : peds) {
    const double d = (p.pose.position - det.position).norm();
    if (d <= radius && d < best) {
      best = d;
      nearest = &p;
    }
  }
  return nearest != nullptr ? nearest->emotion : Emotion::Neutral;
}

std::vector<PersonDetection> filter_static_detections(std::vector<PersonDetection> detections,
                                                      const GridMap& map, double clearance) {
  const int reach = static_cast<int>(std::ceil(clearance / map.resolution()));
  std::erase_if(detections, [&](const PersonDetection& d) {
    if (!map.contains(d.position)) {
      return true;
    }
    const Cell center = world_to_cell(d.position, map);
    for (int dr = -reach; dr <= reach; ++dr) {
      for (int dc = -reach; dc <= reach; ++dc) {
        const Cell c{center.x() + dc, center.y() + dr};
        if (!map.in_bounds(c) || !map.occupied(c)) {
          continue;
        }
        const Vector2 lo = map.origin() + c.cast<double>() * map.resolution();
        const Vector2 hi = lo + Vector2::Constant(map.resolution());
        const Vector2 nearest = d.position.cwiseMax(lo).cwiseMin(hi);
        if ((nearest - d.position).norm() <= clearance) {
          return true;
        }
      }
    }
    return false;
  });
  return detections;
}

RunResult run(const Scenario& scenario, const ControllerConfig& cfg) {
  validate(scenario);
  validate(cfg.scan);
  validate(cfg.layers);
  validate(cfg.dwa);

  const double dt = scenario.sim_dt;
  const auto max_steps =
      static_cast<std::size_t>(std::floor(scenario.max_sim_time / dt + 1e-9));
  RunLog log;
  RobotState robot{scenario.robot_start, {}, scenario.footprint_radius};
  std::vector<Pedestrian> peds = scenario.pedestrians;
  const auto sense = [&](std::size_t step) {
    return simulate_scan(scenario.map, robot.pose, peds, cfg.scan, splitmix64(scenario.seed + step));
  };
  struct Perception {
    LaserScan scan;
    std::vector<PersonDetection> detections;
    std::vector<Emotion> emotions;
  };
  const auto perceive = [&](std::size_t step) {
    Perception out{sense(step), {}, {}};
    out.detections =
        filter_static_detections(detect_people(out.scan), scenario.map, cfg.static_clearance);
    for (const auto& d : out.detections) {
      out.emotions.push_back(associate_emotion(d, peds, cfg.emotion_association_radius));
    }
    return out;
  };
  const auto plan_from = [&](const Perception& p) {
    return plan_global(compose_global(scenario.map, p.detections, p.emotions,
                                      scenario.adaptation_enabled, cfg.layers),
                       robot.pose.position, scenario.goal, cfg.layers.cost_weight);
  };

  try {
    log.initial_path = plan_from(perceive(0));
  } catch (const std::runtime_error& e) {
    throw PlanningFailed(std::string("no initial global path: ") + e.what());
  }
  GlobalPath path = log.initial_path;
  log.replan_events.push_back(0.0);

  double last_replan = 0.0;
  int consecutive_recoveries = 0;

  for (std::size_t step = 0;; ++step) {
    const double t = static_cast<double>(step) * dt;
    log.times.push_back(t);
    log.poses.push_back(robot.pose);
    log.safety.push_back(evaluate_safety(t, robot.pose.position, robot.footprint_radius, peds));

    Perception perception = perceive(step);
    const LaserScan& scan = perception.scan;
    std::vector<PersonDetection>& detections = perception.detections;
    const std::vector<Emotion>& emotions = perception.emotions;
    if (step == 0) {
      log.initial_scan = scan;
    }

    const bool arrived = (robot.pose.position - scenario.goal).norm() <= scenario.goal_tolerance;
    if (arrived || step >= max_steps) {
      log.commands.push_back({});
      log.detections.push_back(std::move(detections));
      break;
    }

    const Costmap local_cm = compose_local(scenario.map, scan, detections, emotions,
                                           scenario.adaptation_enabled, cfg.layers,
                                           cfg.local_window);
    const LocalPlan plan = plan_local_detailed(robot, path, local_cm, cfg.dwa, dt);
    consecutive_recoveries = plan.recovery ? consecutive_recoveries + 1 : 0;

    log.commands.push_back(plan.command);
    log.detections.push_back(std::move(detections));

    robot = step_robot(robot, plan.command, dt);
    peds = step_pedestrians(peds, dt);

    const double next_t = static_cast<double>(step + 1) * dt;
    if (next_t - last_replan >= cfg.replan_period - 1e-9 ||
        consecutive_recoveries >= cfg.recovery_replan_count) {
      try {
        path = plan_from(perceive(step + 1));
        log.replan_events.push_back(next_t);
      } catch (const std::runtime_error&) {
        // Keep following the previous path, e.g. while the robot grazes an inscribed cell.
      }
      last_replan = next_t;
      consecutive_recoveries = 0;
    }
  }

  RunResult result;
  result.summary = summarize_run(log.safety, log.poses, scenario);
  result.log = std::move(log);
  return result;
}

PairComparison run_pair(const Scenario& scenario, const ControllerConfig& cfg) {
  Scenario known = scenario;
  known.adaptation_enabled = true;
  Scenario unknown = scenario;
  unknown.adaptation_enabled = false;

  auto known_run = std::async(std::launch::async, [&] { return run(known, cfg); });
  PairComparison cmp;
  cmp.unknown = run(unknown, cfg);
  cmp.known = known_run.get();

  const RunSummary& k = cmp.known.summary;
  const RunSummary& u = cmp.unknown.summary;
  cmp.delta_path_length = k.path_length - u.path_length;
  cmp.delta_duration = k.duration - u.duration;
  cmp.delta_sii_peak = k.sii_peak - u.sii_peak;
  cmp.delta_physiological_violation_steps =
      k.physiological_violation_steps - u.physiological_violation_steps;
  cmp.delta_physical_violation_steps = k.physical_violation_steps - u.physical_violation_steps;
  for (std::size_t i = 0; i < k.people.size() && i < u.people.size(); ++i) {
    cmp.delta_min_distance.push_back(k.people[i].min_distance - u.people[i].min_distance);
  }
  return cmp;
}

std::string trajectory_csv(const RunLog& log) {
  std::string out = "t,x,y,theta,v,w,min_person_distance,sii_max\n";
  char line[256];
  for (std::size_t i = 0; i < log.poses.size(); ++i) {
    const auto& people = log.safety[i].people;
    double sii_max = 0.0;
    for (const auto& p : people) {
      sii_max = std::max(sii_max, p.sii);
    }
    // Without pedestrians the distance column is left empty.
    char distance[32] = "";
    if (!people.empty()) {
      const auto nearest = std::ranges::min_element(
          people, {}, [](const PersonSafety& p) { return p.distance; });
      std::snprintf(distance, sizeof(distance), "%.6f", nearest->distance);
    }
    const Pose2D& pose = log.poses[i];
    const Velocity& cmd = log.commands[i];
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s,%.6f\n", log.times[i],
                  pose.x(), pose.y(), pose.theta, cmd.linear, cmd.angular, distance, sii_max);
    out += line;
  }
  return out;
}

std::string comparison_json(const PairComparison& cmp) {
  using nlohmann::ordered_json;
  const auto summary = [](const RunSummary& s) {
    ordered_json j;
    j["success"] = s.success;
    j["path_length_m"] = s.path_length;
    j["duration_s"] = s.duration;
    j["sii_peak"] = s.sii_peak;
    j["physiological_violation_steps"] = s.physiological_violation_steps;
    j["physical_violation_steps"] = s.physical_violation_steps;
    j["per_person"] = ordered_json::array();
    for (const auto& p : s.people) {
      ordered_json e;
      e["id"] = p.id;
      e["min_distance_m"] = p.min_distance;
      e["sii_peak"] = p.sii_peak;
      e["physiological_violation_steps"] = p.physiological_violation_steps;
      e["physical_violation_steps"] = p.physical_violation_steps;
      j["per_person"].push_back(std::move(e));
    }
    return j;
  };
  ordered_json doc;
  doc["known"] = summary(cmp.known.summary);
  doc["unknown"] = summary(cmp.unknown.summary);
  ordered_json delta;
  delta["path_length_m"] = cmp.delta_path_length;
  delta["duration_s"] = cmp.delta_duration;
  delta["sii_peak"] = cmp.delta_sii_peak;
  delta["physiological_violation_steps"] = cmp.delta_physiological_violation_steps;
  delta["physical_violation_steps"] = cmp.delta_physical_violation_steps;
  delta["min_distance_m"] = cmp.delta_min_distance;
  doc["delta"] = std::move(delta);
  doc["sii_threshold"] = sii_threshold();
  return doc.dump(2) + "\n";
}

}  // namespace socnav
