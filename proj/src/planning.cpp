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

#include "socnav/planning.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <tuple>

namespace socnav {

namespace {

constexpr double kSampleEpsilon = 1e-9;

bool passable(Cost c) { return c < kInscribedCost; }

int sign(__int128 v) { return (v > 0) - (v < 0); }

}  // namespace

double PathCost::value() const {
  return (static_cast<double>(straight) + std::numbers::sqrt2 * static_cast<double>(diagonal)) /
         static_cast<double>(kUnit);
}

std::strong_ordering PathCost::operator<=>(const PathCost& o) const {
  // sign(da + sqrt(2) * db) evaluated in integers.
  const __int128 da = static_cast<__int128>(straight) - o.straight;
  const __int128 db = static_cast<__int128>(diagonal) - o.diagonal;
  int s = 0;
  if (sign(da) >= 0 && sign(db) >= 0) {
    s = (da != 0 || db != 0) ? 1 : 0;
  } else if (sign(da) <= 0 && sign(db) <= 0) {
    s = -1;
  } else {
    const __int128 lhs = da * da;
    const __int128 rhs = 2 * db * db;
    // Mixed signs: the term with the larger magnitude decides.
    const int mag = sign(lhs - rhs);
    s = sign(da) > 0 ? mag : -mag;
  }
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::int64_t cell_entry_weight(Cost cost, double cost_weight) {
  return std::llround((254.0 + cost_weight * static_cast<double>(cost)) *
                      static_cast<double>(PathCost::kScale));
}

GlobalPath plan_global(const Costmap& cm, const Vector2& start, const Vector2& goal,
                       double cost_weight) {
  if (!cm.contains(start) || !passable(cm.at(cm.world_to_cell(start)))) {
    throw StartBlocked("plan_global: start cell is blocked or outside the costmap");
  }
  if (!cm.contains(goal) || !passable(cm.at(cm.world_to_cell(goal)))) {
    throw GoalBlocked("plan_global: goal cell is blocked or outside the costmap");
  }
  const int width = cm.width();
  const int height = cm.height();
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const Cell start_cell = cm.world_to_cell(start);
  const Cell goal_cell = cm.world_to_cell(goal);
  const auto index = [width](const Cell& c) { return c.y() * width + c.x(); };

  std::vector<PathCost> dist(n);
  std::vector<bool> reached(n, false);
  std::vector<bool> settled(n, false);
  std::vector<int> parent(n, -1);

  struct Entry {
    PathCost cost;
    int index;
    bool operator>(const Entry& o) const {
      const auto cmp = cost <=> o.cost;
      return cmp != 0 ? cmp > 0 : index > o.index;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  const int start_idx = index(start_cell);
  const int goal_idx = index(goal_cell);
  dist[static_cast<std::size_t>(start_idx)] = {};
  reached[static_cast<std::size_t>(start_idx)] = true;
  queue.push({{}, start_idx});

  constexpr int kMoves[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  while (!queue.empty()) {
    const Entry e = queue.top();
    queue.pop();
    const auto ui = static_cast<std::size_t>(e.index);
    if (settled[ui]) {
      continue;
    }
    settled[ui] = true;
    if (e.index == goal_idx) {
      break;
    }
    const int col = e.index % width;
    const int row = e.index / width;
    for (const auto& m : kMoves) {
      const int nc = col + m[0];
      const int nr = row + m[1];
      if (nc < 0 || nr < 0 || nc >= width || nr >= height) {
        continue;
      }
      const Cost c = cm.costs()(nr, nc);
      if (!passable(c)) {
        continue;
      }
      const int ni = nr * width + nc;
      const auto vi = static_cast<std::size_t>(ni);
      if (settled[vi]) {
        continue;
      }
      const std::int64_t w = cell_entry_weight(c, cost_weight);
      const bool diagonal = m[0] != 0 && m[1] != 0;
      const PathCost candidate = dist[ui] + (diagonal ? PathCost{0, w} : PathCost{w, 0});
      if (!reached[vi] || candidate < dist[vi]) {
        reached[vi] = true;
        dist[vi] = candidate;
        parent[vi] = e.index;
        queue.push({candidate, ni});
      }
    }
  }
  if (!settled[static_cast<std::size_t>(goal_idx)]) {
    throw NoPath("plan_global: goal unreachable");
  }

  GlobalPath path;
  path.cost = dist[static_cast<std::size_t>(goal_idx)];
  for (int i = goal_idx; i != -1; i = parent[static_cast<std::size_t>(i)]) {
    path.cells.emplace_back(i % width, i / width);
  }
  std::reverse(path.cells.begin(), path.cells.end());
  path.waypoints.reserve(path.cells.size());
  for (const auto& c : path.cells) {
    path.waypoints.push_back(cm.cell_to_world(c));
  }
  return path;
}

void validate(const DWAConfig& cfg) {
  const auto& w = cfg.weights;
  if (!(cfg.v_max > 0.0) || cfg.v_min > cfg.v_max || !(cfg.w_max >= 0.0) ||
      !(cfg.accel_v > 0.0) || !(cfg.accel_w > 0.0) || !(cfg.sim_time > 0.0) ||
      !(cfg.rollout_dt > 0.0) || cfg.n_v_samples < 2 || cfg.n_w_samples < 2 ||
      w.goal_heading < 0.0 || w.path_adherence < 0.0 || w.clearance < 0.0 || w.speed < 0.0 ||
      !(cfg.path_distance_cap > 0.0)) {
    throw ValidationError("invalid DWA configuration");
  }
}

VelocityWindow dynamic_window(const Velocity& current, const DWAConfig& cfg, double control_dt) {
  const auto bounded = [](double lo, double hi, double min, double max) {
    lo = std::clamp(lo, min, max);
    hi = std::clamp(hi, min, max);
    return std::pair{lo, std::max(lo, hi)};
  };
  const auto [v_lo, v_hi] =
      bounded(current.linear - cfg.accel_v * control_dt, current.linear + cfg.accel_v * control_dt,
              cfg.v_min, cfg.v_max);
  const auto [w_lo, w_hi] = bounded(current.angular - cfg.accel_w * control_dt,
                                    current.angular + cfg.accel_w * control_dt, -cfg.w_max,
                                    cfg.w_max);
  return {v_lo, v_hi, w_lo, w_hi};
}

std::vector<Pose2D> rollout(const Pose2D& pose, const Velocity& cmd, const DWAConfig& cfg) {
  const auto steps = static_cast<std::size_t>(std::floor(cfg.sim_time / cfg.rollout_dt + kSampleEpsilon));
  std::vector<Pose2D> poses;
  poses.reserve(steps + 1);
  poses.push_back(pose);
  for (std::size_t i = 0; i < steps; ++i) {
    poses.push_back(integrate_arc(poses.back(), cmd, cfg.rollout_dt));
  }
  return poses;
}

TrajectoryCandidate score_trajectory(TrajectoryCandidate t, const GlobalPath& path,
                                     const Vector2& goal, const Costmap& local_cm,
                                     const DWAConfig& cfg) {
  t.feasible = false;
  t.score = 0.0;
  int max_cost = 0;
  for (const auto& p : t.poses) {
    const Cost c = local_cm.cost_at(p.position);
    if (!passable(c)) {
      t.max_cost = c;
      return t;
    }
    max_cost = std::max<int>(max_cost, c);
  }
  t.max_cost = max_cost;
  t.feasible = true;

  const Pose2D& end = t.poses.back();
  const Vector2 to_goal = goal - end.position;
  const double heading_error =
      to_goal.norm() > 0.0
          ? std::abs(normalize_angle(std::atan2(to_goal.y(), to_goal.x()) - end.theta))
          : 0.0;

  double path_distance = cfg.path_distance_cap;
  for (const auto& w : path.waypoints) {
    path_distance = std::min(path_distance, (w - end.position).norm());
  }

  const auto& w = cfg.weights;
  t.score = w.goal_heading * (1.0 - heading_error / std::numbers::pi) +
            w.path_adherence * (1.0 - path_distance / cfg.path_distance_cap) +
            w.clearance * (1.0 - static_cast<double>(max_cost) / kMaxInflatedCost) +
            w.speed * (t.command.linear / cfg.v_max);
  return t;
}

Vector2 local_goal(const GlobalPath& path, const Vector2& position, double lookahead) {
  if (path.empty()) {
    throw ValidationError("local_goal: empty global path");
  }
  const auto& wps = path.waypoints;
  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const double d = (wps[i] - position).squaredNorm();
    if (d < best) {
      best = d;
      nearest = i;
    }
  }
  double walked = 0.0;
  std::size_t i = nearest;
  while (i + 1 < wps.size()) {
    const double seg = (wps[i + 1] - wps[i]).norm();
    if (walked + seg > lookahead) {
      break;
    }
    walked += seg;
    ++i;
  }
  return wps[i];
}

LocalPlan plan_local_detailed(const RobotState& state, const GlobalPath& path,
                              const Costmap& local_cm, const DWAConfig& cfg, double control_dt) {
  if (path.empty()) {
    throw ValidationError("plan_local: empty global path");
  }
  const Vector2 goal = local_goal(path, state.pose.position, cfg.goal_lookahead);
  const VelocityWindow win = dynamic_window(state.velocity, cfg, control_dt);

  bool found = false;
  TrajectoryCandidate best;
  const auto better = [](const TrajectoryCandidate& a, const TrajectoryCandidate& b) {
    if (a.score != b.score) {
      return a.score > b.score;
    }
    const double wa = std::abs(a.command.angular);
    const double wb = std::abs(b.command.angular);
    return std::tie(wa, a.command.linear, a.command.angular) <
           std::tie(wb, b.command.linear, b.command.angular);
  };
  for (int i = 0; i < cfg.n_v_samples; ++i) {
    const double v = win.v_lo + (win.v_hi - win.v_lo) * i / (cfg.n_v_samples - 1);
    for (int j = 0; j < cfg.n_w_samples; ++j) {
      const double w = win.w_lo + (win.w_hi - win.w_lo) * j / (cfg.n_w_samples - 1);
      TrajectoryCandidate cand;
      cand.command = {v, w};
      cand.poses = rollout(state.pose, cand.command, cfg);
      cand = score_trajectory(std::move(cand), path, goal, local_cm, cfg);
      if (cand.feasible && (!found || better(cand, best))) {
        best = std::move(cand);
        found = true;
      }
    }
  }
  if (!found) {
    return {{0.0, cfg.w_recovery}, true};
  }
  return {best.command, false};
}

Velocity plan_local(const RobotState& state, const GlobalPath& path, const Costmap& local_cm,
                    const DWAConfig& cfg, double control_dt) {
  return plan_local_detailed(state, path, local_cm, cfg, control_dt).command;
}

}  // namespace socnav
