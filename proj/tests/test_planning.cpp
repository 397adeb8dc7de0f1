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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "socnav/planning.hpp"
#include "oracles.hpp"

namespace socnav {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(PlanGlobal, EmptyMapStraightPath) {
  const Costmap cm(0.05, 200, 200);
  const GlobalPath path = plan_global(cm, {1.0, 1.0}, {9.0, 1.0}, 3.0);
  EXPECT_DOUBLE_EQ(path.total_cost(), 160.0);
  EXPECT_EQ(path.cost, (PathCost{160 * cell_entry_weight(0, 3.0), 0}));
  ASSERT_EQ(path.waypoints.size(), 161u);
  for (const auto& w : path.waypoints) {
    EXPECT_NEAR(w.y(), 1.025, 1e-12);
  }
  EXPECT_NEAR(path.waypoints.front().x(), 1.025, 1e-12);
  EXPECT_NEAR(path.waypoints.back().x(), 9.025, 1e-12);
}

TEST(PlanGlobal, StartEqualsGoal) {
  const Costmap cm(0.05, 20, 20);
  const GlobalPath path = plan_global(cm, {0.51, 0.51}, {0.52, 0.53}, 3.0);
  ASSERT_EQ(path.waypoints.size(), 1u);
  EXPECT_EQ(path.total_cost(), 0.0);
}

TEST(PlanGlobal, Errors) {
  Costmap cm(0.05, 20, 20);
  for (int r = 0; r < 20; ++r) {
    cm.at({10, r}) = kLethalCost;
  }
  EXPECT_THROW(plan_global(cm, {0.1, 0.1}, {0.9, 0.1}, 3.0), NoPath);
  cm.at({1, 1}) = kInscribedCost;
  EXPECT_THROW(plan_global(cm, {0.06, 0.06}, {0.3, 0.3}, 3.0), StartBlocked);
  EXPECT_THROW(plan_global(cm, {0.3, 0.3}, {0.06, 0.06}, 3.0), GoalBlocked);
  EXPECT_THROW(plan_global(cm, {-1.0, 0.3}, {0.2, 0.2}, 3.0), StartBlocked);
}

TEST(PathCost, OrderingMatchesRealValue) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const PathCost a{static_cast<std::int64_t>(rng() % 100000),
                     static_cast<std::int64_t>(rng() % 100000)};
    const PathCost b{static_cast<std::int64_t>(rng() % 100000),
                     static_cast<std::int64_t>(rng() % 100000)};
    const long double va = a.straight + std::numbers::sqrt2_v<long double> * a.diagonal;
    const long double vb = b.straight + std::numbers::sqrt2_v<long double> * b.diagonal;
    if (a == b) {
      EXPECT_EQ(a <=> b, std::strong_ordering::equal);
    } else {
      EXPECT_EQ(a < b, va < vb);
    }
  }
}

TEST(PlanGlobal, PropertyMatchesBellmanFordOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Costmap cm = testing_oracles::random_costmap(20, 20, rng);
    const Cell s{static_cast<int>(rng() % 20), static_cast<int>(rng() % 20)};
    const Cell g{static_cast<int>(rng() % 20), static_cast<int>(rng() % 20)};
    const double w = 3.0;
    const auto oracle = testing_oracles::bellman_ford(cm, s, w);
    const auto expected = oracle[static_cast<std::size_t>(g.y() * 20 + g.x())];
    if (cm.at(s) >= kInscribedCost || cm.at(g) >= kInscribedCost) {
      continue;
    }
    if (!expected) {
      EXPECT_THROW(plan_global(cm, cm.cell_to_world(s), cm.cell_to_world(g), w), NoPath);
      continue;
    }
    const GlobalPath path = plan_global(cm, cm.cell_to_world(s), cm.cell_to_world(g), w);
    ASSERT_EQ(path.cost, *expected) << "trial " << trial;
    // The path itself realizes its cost through 8-connected passable cells.
    PathCost walked;
    for (std::size_t i = 1; i < path.cells.size(); ++i) {
      const Cell d = path.cells[i] - path.cells[i - 1];
      ASSERT_LE(d.cwiseAbs().maxCoeff(), 1);
      ASSERT_LT(cm.at(path.cells[i]), kInscribedCost);
      const std::int64_t cw = cell_entry_weight(cm.at(path.cells[i]), w);
      walked = walked + (d.x() != 0 && d.y() != 0 ? PathCost{0, cw} : PathCost{cw, 0});
    }
    ASSERT_EQ(walked, path.cost);
    EXPECT_EQ(path.cells.front(), s);
    EXPECT_EQ(path.cells.back(), g);
  }
}

TEST(DynamicWindow, Examples) {
  DWAConfig cfg;
  cfg.accel_v = 1.0;
  auto win = dynamic_window({0.0, 0.0}, cfg, 0.1);
  EXPECT_NEAR(win.v_lo, 0.0, 1e-12);
  EXPECT_NEAR(win.v_hi, 0.1, 1e-12);
  win = dynamic_window({cfg.v_max, 0.0}, cfg, 0.1);
  EXPECT_EQ(win.v_hi, cfg.v_max);
  win = dynamic_window({0.3, 0.0}, cfg, 0.1);
  EXPECT_NEAR(win.v_lo, 0.2, 1e-12);
  EXPECT_NEAR(win.v_hi, 0.4, 1e-12);
  EXPECT_NEAR(win.w_lo, -0.2, 1e-12);
  EXPECT_NEAR(win.w_hi, 0.2, 1e-12);
}

TEST(Rollout, Examples) {
  DWAConfig cfg;
  const auto still = rollout({1, 2, 0.5}, {0, 0}, cfg);
  ASSERT_EQ(still.size(), 21u);
  for (const auto& p : still) {
    EXPECT_EQ(p, (Pose2D{1, 2, 0.5}));
  }
  const auto straight = rollout({0, 0, 0}, {1, 0}, cfg);
  ASSERT_EQ(straight.size(), 21u);
  EXPECT_NEAR(straight.back().x(), 2.0, 1e-12);
  const auto arc = rollout({0, 0, 0}, {1, 1}, cfg);
  // Closed form: a circle of radius v / w.
  EXPECT_NEAR(arc.back().x(), std::sin(2.0), 1e-9);
  EXPECT_NEAR(arc.back().y(), 1.0 - std::cos(2.0), 1e-9);
  cfg.sim_time = 0.3;
  EXPECT_EQ(rollout({0, 0, 0}, {1, 0}, cfg).size(), 4u);
}

GlobalPath straight_path(const Vector2& a, const Vector2& b, int n) {
  GlobalPath p;
  for (int i = 0; i <= n; ++i) {
    p.waypoints.push_back(a + (b - a) * (static_cast<double>(i) / n));
  }
  return p;
}

TEST(ScoreTrajectory, InscribedCellIsInfeasible) {
  Costmap cm(0.05, 100, 100);
  cm.at(cm.world_to_cell({1.5, 2.5})) = kInscribedCost;
  DWAConfig cfg;
  TrajectoryCandidate t;
  t.command = {0.5, 0.0};
  t.poses = rollout({1.0, 2.5, 0.0}, t.command, cfg);
  const auto scored = score_trajectory(t, straight_path({1, 2.5}, {4, 2.5}, 60), {4, 2.5}, cm, cfg);
  EXPECT_FALSE(scored.feasible);
}

TEST(ScoreTrajectory, MaximalCaseSumsWeights) {
  const Costmap cm(0.05, 100, 100);
  DWAConfig cfg;
  TrajectoryCandidate t;
  t.command = {cfg.v_max, 0.0};
  t.poses = rollout({1.0, 2.5, 0.0}, t.command, cfg);
  const auto path = straight_path({1.0, 2.5}, {2.0, 2.5}, 20);
  const auto scored = score_trajectory(t, path, {4.0, 2.5}, cm, cfg);
  ASSERT_TRUE(scored.feasible);
  const auto& w = cfg.weights;
  EXPECT_NEAR(scored.score, w.goal_heading + w.path_adherence + w.clearance + w.speed, 1e-12);
}

TEST(ScoreTrajectory, ClearanceTermDifference) {
  Costmap clean(0.05, 100, 100);
  Costmap costly = clean;
  costly.at(costly.world_to_cell({1.5, 2.5})) = 126;
  DWAConfig cfg;
  TrajectoryCandidate t;
  t.command = {0.3, 0.0};
  t.poses = rollout({1.0, 2.5, 0.0}, t.command, cfg);
  const auto path = straight_path({1.0, 2.5}, {4.0, 2.5}, 60);
  const auto a = score_trajectory(t, path, {4.0, 2.5}, clean, cfg);
  const auto b = score_trajectory(t, path, {4.0, 2.5}, costly, cfg);
  EXPECT_NEAR(a.score - b.score, cfg.weights.clearance * 0.5, 1e-12);
  EXPECT_EQ(b.max_cost, 126);
}

RobotState at_rest(const Pose2D& p) { return {p, {}, 0.3}; }

TEST(PlanLocal, GoalAheadGoesStraight) {
  const Costmap cm(0.05, 200, 200);
  const DWAConfig cfg;
  const auto path = straight_path({2, 5}, {8, 5}, 120);
  const Velocity v = plan_local(at_rest({2, 5, 0}), path, cm, cfg, 0.1);
  EXPECT_EQ(v.angular, 0.0);
  EXPECT_GT(v.linear, 0.0);
}

TEST(PlanLocal, LethalRingTriggersRecovery) {
  Costmap cm(0.05, 100, 100);
  const Vector2 c{2.5, 2.5};
  for (int r = 0; r < 100; ++r) {
    for (int col = 0; col < 100; ++col) {
      const double d = (cm.cell_to_world({col, r}) - c).norm();
      if (d > 0.03 && d < 0.2) {
        cm.at({col, r}) = kLethalCost;
      }
    }
  }
  DWAConfig cfg;
  cfg.v_min = 0.05;  // every sample moves
  const auto plan =
      plan_local_detailed(at_rest({2.5, 2.5, 0}), straight_path(c, {4, 2.5}, 30), cm, cfg, 0.1);
  EXPECT_TRUE(plan.recovery);
  EXPECT_EQ(plan.command, (Velocity{0.0, 0.5}));
}

TEST(PlanLocal, ObstacleAheadMatchesExhaustiveOracle) {
  Costmap cm(0.05, 200, 200);
  // Obstacle 0.85 m ahead, extending to the right.
  for (int r = 0; r < 200; ++r) {
    for (int c = 0; c < 200; ++c) {
      const Vector2 p = cm.cell_to_world({c, r});
      if (p.x() > 2.85 && p.x() < 3.2 && p.y() < 5.2 && p.y() > 3.0) {
        cm.at({c, r}) = kLethalCost;
      }
    }
  }
  cm = apply_inflation_layer(cm, LayerParams{});
  const DWAConfig cfg;
  const RobotState s{{2.0, 5.0, 0.0}, {0.3, 0.0}, 0.3};
  const auto path = straight_path({2, 5}, {8, 5}, 120);
  const Velocity v = plan_local(s, path, cm, cfg, 0.1);
  const auto win0 = dynamic_window(s.velocity, cfg, 0.1);
  TrajectoryCandidate straight;
  straight.command = {win0.v_hi, 0.0};
  straight.poses = rollout(s.pose, straight.command, cfg);
  EXPECT_FALSE(score_trajectory(straight, path, {4, 5}, cm, cfg).feasible);
  EXPECT_NE(v, straight.command);

  // Oracle: exhaustive scoring of the same sample grid.
  const auto win = dynamic_window(s.velocity, cfg, 0.1);
  const Vector2 carrot = local_goal(path, s.pose.position, cfg.goal_lookahead);
  double best = -1e300;
  Velocity arg{};
  for (int i = 0; i < cfg.n_v_samples; ++i) {
    for (int j = 0; j < cfg.n_w_samples; ++j) {
      TrajectoryCandidate t;
      t.command = {win.v_lo + (win.v_hi - win.v_lo) * i / (cfg.n_v_samples - 1),
                   win.w_lo + (win.w_hi - win.w_lo) * j / (cfg.n_w_samples - 1)};
      t.poses = rollout(s.pose, t.command, cfg);
      t = score_trajectory(t, path, carrot, cm, cfg);
      if (t.feasible && t.score > best) {
        best = t.score;
        arg = t.command;
      }
    }
  }
  ASSERT_GT(best, -1e300);
  EXPECT_EQ(v, arg);
}

TEST(PlanLocal, ObstacleDeadAheadWithFreeLeftTurnsLeft) {
  Costmap cm(0.05, 200, 200);
  // Obstacle face 0.5 m ahead of the robot, the block extending to the right.
  for (int r = 0; r < 200; ++r) {
    for (int c = 0; c < 200; ++c) {
      const Vector2 p = cm.cell_to_world({c, r});
      if (p.x() > 2.5 && p.x() < 2.85 && p.y() < 5.2 && p.y() > 2.0) {
        cm.at({c, r}) = kLethalCost;
      }
    }
  }
  cm = apply_inflation_layer(cm, LayerParams{});
  const DWAConfig cfg;
  const RobotState s{{2.0, 5.0, 0.0}, {0.0, 0.0}, 0.3};
  const GlobalPath path = plan_global(cm, {2.0, 5.0}, {4.0, 5.0}, LayerParams{}.cost_weight);
  const LocalPlan plan = plan_local_detailed(s, path, cm, cfg, 0.1);
  EXPECT_FALSE(plan.recovery);
  EXPECT_GT(plan.command.angular, 0.0);

  const auto win = dynamic_window(s.velocity, cfg, 0.1);
  const Vector2 carrot = local_goal(path, s.pose.position, cfg.goal_lookahead);
  double best = -1e300;
  Velocity arg{};
  for (int i = 0; i < cfg.n_v_samples; ++i) {
    for (int j = 0; j < cfg.n_w_samples; ++j) {
      TrajectoryCandidate t;
      t.command = {win.v_lo + (win.v_hi - win.v_lo) * i / (cfg.n_v_samples - 1),
                   win.w_lo + (win.w_hi - win.w_lo) * j / (cfg.n_w_samples - 1)};
      t.poses = rollout(s.pose, t.command, cfg);
      t = score_trajectory(t, path, carrot, cm, cfg);
      if (t.feasible && t.score > best) {
        best = t.score;
        arg = t.command;
      }
    }
  }
  EXPECT_EQ(plan.command, arg);
}

TEST(PlanLocal, PropertyCommandInsideWindowAndDeterministic) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    Costmap cm(0.05, 80, 80);
    for (int k = 0; k < 30; ++k) {
      cm.at({static_cast<int>(rng() % 80), static_cast<int>(rng() % 80)}) = kLethalCost;
    }
    cm = apply_inflation_layer(cm, LayerParams{});
    const DWAConfig cfg;
    const RobotState s{{1.0 + 2 * u(rng), 1.0 + 2 * u(rng), 2 * kPi * u(rng)},
                       {0.5 * u(rng), 2 * u(rng) - 1},
                       0.3};
    const auto path = straight_path(s.pose.position, {3.5, 3.5}, 40);
    const auto plan = plan_local_detailed(s, path, cm, cfg, 0.1);
    if (!plan.recovery) {
      EXPECT_TRUE(dynamic_window(s.velocity, cfg, 0.1).contains(plan.command));
    }
    EXPECT_GE(plan.command.linear, cfg.v_min);
    EXPECT_LE(plan.command.linear, cfg.v_max);
    EXPECT_LE(std::abs(plan.command.angular), cfg.w_max);
    EXPECT_EQ(plan.command, plan_local(s, path, cm, cfg, 0.1));
  }
}

TEST(LocalGoal, WalksLookaheadAlongPath) {
  const auto path = straight_path({0, 0}, {4, 0}, 80);
  EXPECT_NEAR(local_goal(path, {0.0, 0.3}, 1.5).x(), 1.5, 1e-9);
  EXPECT_NEAR(local_goal(path, {3.5, 0.0}, 1.5).x(), 4.0, 1e-9);
  EXPECT_THROW(local_goal(GlobalPath{}, {0, 0}, 1.0), ValidationError);
}

TEST(DwaConfig, ValidationRejectsBadValues) {
  DWAConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.n_v_samples = 1;
  EXPECT_THROW(validate(cfg), ValidationError);
  cfg = DWAConfig{};
  cfg.weights.clearance = -1;
  EXPECT_THROW(validate(cfg), ValidationError);
}

}  // namespace
}  // namespace socnav
