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

#ifndef SOCNAV_PLANNING_HPP_
#define SOCNAV_PLANNING_HPP_

#include <compare>
#include <cstdint>
#include <vector>

#include "socnav/costmap.hpp"
#include "socnav/world.hpp"

namespace socnav {

struct NoPath : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StartBlocked : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GoalBlocked : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact path cost `(straight + sqrt(2) * diagonal) / kUnit` in cell-steps.
///
/// Each term accumulates integer edge weights, so sums are associative and two costs compare
/// exactly; this keeps the (cost, cell index) tie-break of the global planner meaningful.
struct PathCost {
  static constexpr std::int64_t kScale = 4096;
  static constexpr std::int64_t kUnit = 254 * kScale;

  std::int64_t straight{0};
  std::int64_t diagonal{0};

  double value() const;
  PathCost operator+(const PathCost& o) const {
    return {straight + o.straight, diagonal + o.diagonal};
  }
  bool operator==(const PathCost&) const = default;
  std::strong_ordering operator<=>(const PathCost& o) const;
};

/// Integer weight of entering a cell with the given cost: kScale * (254 + cost_weight * cost).
std::int64_t cell_entry_weight(Cost cost, double cost_weight);

struct GlobalPath {
  std::vector<Cell> cells;
  std::vector<Vector2> waypoints;
  PathCost cost;

  double total_cost() const { return cost.value(); }
  bool empty() const { return waypoints.empty(); }
};

/// 8-connected Dijkstra over `cm`; cells with cost >= 253 are impassable.
GlobalPath plan_global(const Costmap& cm, const Vector2& start, const Vector2& goal,
                       double cost_weight);

struct DWAWeights {
  double goal_heading{1.0};
  double path_adherence{1.5};
  double clearance{1.0};
  double speed{1.0};
};

struct DWAConfig {
  double v_max{0.5};
  double v_min{0.0};
  double w_max{1.0};
  double accel_v{1.0};
  double accel_w{2.0};
  double sim_time{2.0};
  double rollout_dt{0.1};
  int n_v_samples{11};
  int n_w_samples{21};
  double w_recovery{0.5};
  double path_distance_cap{2.0};
  double goal_lookahead{1.5};  // arc length along the global path to the local goal
  DWAWeights weights;
};

void validate(const DWAConfig& cfg);

struct VelocityWindow {
  double v_lo;
  double v_hi;
  double w_lo;
  double w_hi;

  bool contains(const Velocity& v, double eps = 1e-12) const {
    return v.linear >= v_lo - eps && v.linear <= v_hi + eps && v.angular >= w_lo - eps &&
           v.angular <= w_hi + eps;
  }
};

VelocityWindow dynamic_window(const Velocity& current, const DWAConfig& cfg, double control_dt);

std::vector<Pose2D> rollout(const Pose2D& pose, const Velocity& cmd, const DWAConfig& cfg);

struct TrajectoryCandidate {
  Velocity command;
  std::vector<Pose2D> poses;
  double score{0.0};
  bool feasible{false};
  int max_cost{0};
};

TrajectoryCandidate score_trajectory(TrajectoryCandidate t, const GlobalPath& path,
                                     const Vector2& goal, const Costmap& local_cm,
                                     const DWAConfig& cfg);

/// Point on `path` reached by walking `lookahead` meters of arc length past the waypoint nearest
/// to `position`; the last waypoint when the remaining path is shorter.
Vector2 local_goal(const GlobalPath& path, const Vector2& position, double lookahead);

struct LocalPlan {
  Velocity command;
  bool recovery{false};
};

/// Best-scoring feasible command over the sampled dynamic window, or rotate-in-place recovery.
/// Heading is scored against local_goal(path, pose, cfg.goal_lookahead).
LocalPlan plan_local_detailed(const RobotState& state, const GlobalPath& path,
                              const Costmap& local_cm, const DWAConfig& cfg, double control_dt);

Velocity plan_local(const RobotState& state, const GlobalPath& path, const Costmap& local_cm,
                    const DWAConfig& cfg, double control_dt);

}  // namespace socnav

#endif  // SOCNAV_PLANNING_HPP_
