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
#include <string>

#include <gtest/gtest.h>

#include "socnav/world.hpp"

namespace socnav {
namespace {

constexpr double kPi = std::numbers::pi;

const char* kMinimal = R"({
  "map": {"resolution": 0.05, "width": 200, "height": 200},
  "robot": {"start": [1, 1, 0], "goal": [9, 9]}
})";

// Fine-grained forward Euler integration of the unicycle model.
Pose2D euler(Pose2D p, const Velocity& cmd, double dt, int substeps) {
  const double h = dt / substeps;
  double x = p.x();
  double y = p.y();
  double th = p.theta;
  for (int i = 0; i < substeps; ++i) {
    x += cmd.linear * std::cos(th) * h;
    y += cmd.linear * std::sin(th) * h;
    th += cmd.angular * h;
  }
  return {x, y, th};
}

TEST(NormalizeAngle, WrapsIntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(normalize_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi), kPi);
  EXPECT_NEAR(normalize_angle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(normalize_angle(-kPi / 2 + 4 * kPi), -kPi / 2, 1e-12);
  EXPECT_NEAR(normalize_angle(0.25f), 0.25f, 1e-7f);
}

TEST(ProxemicRadius, MatchesEmotionTable) {
  EXPECT_EQ(proxemic_radius(Emotion::Happy), 0.5);
  EXPECT_EQ(proxemic_radius(Emotion::Neutral), 1.0);
  EXPECT_EQ(proxemic_radius(Emotion::Angry), 1.5);
  static_assert(proxemic_radius(Emotion::Happy) < proxemic_radius(Emotion::Neutral));
  static_assert(proxemic_radius(Emotion::Neutral) < proxemic_radius(Emotion::Angry));
}

TEST(Emotion, StringRoundTrip) {
  for (Emotion e : {Emotion::Happy, Emotion::Neutral, Emotion::Angry}) {
    EXPECT_EQ(emotion_from_string(to_string(e)), e);
  }
  EXPECT_THROW(emotion_from_string("Angry"), ParseError);
  EXPECT_THROW(emotion_from_string("sad"), ParseError);
}

TEST(GridMap, WorldToCellExamples) {
  const GridMap map(0.05, 200, 200);
  EXPECT_EQ(world_to_cell({0.0, 0.0}, map), Cell(0, 0));
  EXPECT_EQ(world_to_cell({1.0, 2.0}, map), Cell(20, 40));
  EXPECT_THROW(world_to_cell({-0.01, 1.0}, map), OutOfBounds);
  EXPECT_THROW(world_to_cell({10.0, 1.0}, map), OutOfBounds);
}

TEST(GridMap, CellToWorldExamples) {
  const GridMap map(0.05, 200, 200);
  EXPECT_NEAR(cell_to_world({0, 0}, map).x(), 0.025, 1e-12);
  EXPECT_NEAR(cell_to_world({0, 0}, map).y(), 0.025, 1e-12);
  EXPECT_NEAR(cell_to_world({20, 40}, map).x(), 1.025, 1e-12);
  EXPECT_NEAR(cell_to_world({20, 40}, map).y(), 2.025, 1e-12);
  EXPECT_THROW(cell_to_world({200, 0}, map), OutOfBounds);
}

TEST(GridMap, RoundTripIsIdentityOnCells) {
  const GridMap map(0.05, 37, 23, Vector2(-1.3, 2.7));
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      EXPECT_EQ(world_to_cell(cell_to_world({c, r}, map), map), Cell(c, r));
    }
  }
}

TEST(Pedestrian, LegsStraddlePerpendicularToHeading) {
  Pedestrian p;
  p.pose = {2.0, 0.0, 0.0};
  const auto legs = p.leg_centers();
  EXPECT_NEAR((legs[0] - legs[1]).norm(), p.leg_separation, 1e-12);
  EXPECT_NEAR(legs[0].x(), 2.0, 1e-12);
  EXPECT_NEAR(legs[1].x(), 2.0, 1e-12);
  EXPECT_NEAR(0.5 * (legs[0] + legs[1]).y(), 0.0, 1e-12);
}

TEST(StepRobot, StraightLine) {
  const RobotState s{{0, 0, 0}, {}, 0.3};
  const RobotState n = step_robot(s, {1.0, 0.0}, 0.1);
  EXPECT_NEAR(n.pose.x(), 0.1, 1e-12);
  EXPECT_NEAR(n.pose.y(), 0.0, 1e-12);
  EXPECT_NEAR(n.pose.theta, 0.0, 1e-12);
  EXPECT_EQ(n.velocity, (Velocity{1.0, 0.0}));
}

TEST(StepRobot, PureRotation) {
  const RobotState s{{1.5, -2.0, 0.3}, {}, 0.3};
  const RobotState n = step_robot(s, {0.0, 1.0}, kPi);
  EXPECT_NEAR(n.pose.x(), 1.5, 1e-12);
  EXPECT_NEAR(n.pose.y(), -2.0, 1e-12);
  EXPECT_NEAR(std::abs(normalize_angle(n.pose.theta - (0.3 + kPi))), 0.0, 1e-12);
}

TEST(StepRobot, ArcMatchesEulerOracle) {
  const RobotState s{{0, 0, 0}, {}, 0.3};
  const RobotState n = step_robot(s, {1.0, 1.0}, 0.1);
  const Pose2D e = euler(s.pose, {1.0, 1.0}, 0.1, 1000);
  EXPECT_LT((n.pose.position - e.position).norm(), 1e-4);
  EXPECT_NEAR(n.pose.theta, e.theta, 1e-9);
}

TEST(StepRobot, PropertyArcMatchesEulerOverRandomCommands) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(-5, 5);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> v(-1, 1);
  std::uniform_real_distribution<double> w(-2, 2);
  for (int i = 0; i < 500; ++i) {
    const RobotState s{{pos(rng), pos(rng), ang(rng)}, {}, 0.3};
    const Velocity cmd{v(rng), i % 10 == 0 ? 0.0 : w(rng)};
    const RobotState n = step_robot(s, cmd, 0.1);
    const Pose2D e = euler(s.pose, cmd, 0.1, 2000);
    ASSERT_LT((n.pose.position - e.position).norm(), 1e-4) << "trial " << i;
    ASSERT_NEAR(std::abs(normalize_angle(n.pose.theta - e.theta)), 0.0, 1e-9);
  }
}

TEST(StepRobot, ZeroCommandIsIdentityAndDeterministic) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const RobotState s{{u(rng), u(rng), u(rng)}, {0.2, 0.1}, 0.3};
    const double dt = std::abs(u(rng)) + 0.01;
    EXPECT_EQ(step_robot(s, {}, dt).pose, s.pose);
    const Velocity cmd{u(rng), u(rng)};
    EXPECT_EQ(step_robot(s, cmd, dt).pose, step_robot(s, cmd, dt).pose);
  }
}

TEST(StepPedestrians, Examples) {
  Pedestrian still;
  still.id = 1;
  still.pose = {3, 4, 1.0};
  Pedestrian walker;
  walker.id = 2;
  walker.pose = {0, 0, 0};
  walker.velocity = {0.5, 0.0};
  walker.emotion = Emotion::Angry;
  const auto next = step_pedestrians({still, walker}, 0.2);
  ASSERT_EQ(next.size(), 2u);
  EXPECT_EQ(next[0].id, 1);
  EXPECT_EQ(next[0].pose, still.pose);
  EXPECT_EQ(next[1].id, 2);
  EXPECT_NEAR(next[1].pose.x(), 0.1, 1e-12);
  EXPECT_EQ(next[1].emotion, Emotion::Angry);
  EXPECT_EQ(next[1].body_radius, walker.body_radius);
}

TEST(LoadScenario, MinimalDocumentAppliesDefaults) {
  const Scenario s = load_scenario(kMinimal);
  EXPECT_TRUE(s.pedestrians.empty());
  EXPECT_EQ(s.map.width(), 200);
  EXPECT_DOUBLE_EQ(s.sim_dt, Scenario::kDefaultDt);
  EXPECT_DOUBLE_EQ(s.max_sim_time, Scenario::kDefaultMaxTime);
  EXPECT_DOUBLE_EQ(s.goal_tolerance, Scenario::kDefaultGoalTolerance);
  EXPECT_DOUBLE_EQ(s.footprint_radius, RobotState::kDefaultFootprintRadius);
  EXPECT_TRUE(s.adaptation_enabled);
  EXPECT_EQ(s.goal, Vector2(9, 9));
}

TEST(LoadScenario, AngryPedestrian) {
  const Scenario s = load_scenario(R"({
    "map": {"resolution": 0.05, "width": 200, "height": 200},
    "robot": {"start": [1, 1, 0], "goal": [9, 9]},
    "pedestrians": [{"id": 3, "pose": [5, 5, 0], "emotion": "angry"}]
  })");
  ASSERT_EQ(s.pedestrians.size(), 1u);
  EXPECT_EQ(s.pedestrians[0].emotion, Emotion::Angry);
  EXPECT_EQ(proxemic_radius(s.pedestrians[0].emotion), 1.5);
}

TEST(LoadScenario, GoalInsideWallIsRejected) {
  EXPECT_THROW(load_scenario(R"({
    "map": {"resolution": 0.05, "width": 200, "height": 200, "occupied": [[180, 180]]},
    "robot": {"start": [1, 1, 0], "goal": [9.01, 9.01]}
  })"),
               ValidationError);
}

TEST(LoadScenario, AsciiMapWithScale) {
  const Scenario s = load_scenario(R"({
    "map": {"resolution": 0.5, "scale": 2, "ascii": ["####", "#..#", "####"]},
    "robot": {"start": [2.5, 1.5, 0], "goal": [2.6, 1.6]}
  })");
  EXPECT_EQ(s.map.width(), 8);
  EXPECT_EQ(s.map.height(), 6);
  EXPECT_TRUE(s.map.occupied({0, 0}));
  EXPECT_FALSE(s.map.occupied({2, 2}));
  EXPECT_FALSE(s.map.occupied({5, 3}));
  EXPECT_TRUE(s.map.occupied({6, 3}));
}

TEST(LoadScenario, TypedErrors) {
  EXPECT_THROW(load_scenario("{"), ParseError);
  EXPECT_THROW(load_scenario("[]"), ParseError);
  EXPECT_THROW(load_scenario(R"({"map": {"width": 10, "height": 10}})"), ParseError);
  EXPECT_THROW(load_scenario(R"({
    "map": {"resolution": 0.05, "width": 200, "height": 200},
    "robot": {"start": [1, 1, 0], "goal": [9, 9]},
    "sim": {"dt": 0}
  })"),
               ValidationError);
  EXPECT_THROW(load_scenario(R"({
    "map": {"resolution": 0.05, "width": 200, "height": 200},
    "robot": {"start": [11, 1, 0], "goal": [9, 9]}
  })"),
               ValidationError);
  EXPECT_THROW(load_scenario(R"({
    "map": {"resolution": 0.05, "width": 200, "height": 200},
    "robot": {"start": [1, 1, 0], "goal": [9, 9]},
    "pedestrians": [{"id": 1, "pose": [5, 5, 0], "emotion": "bored"}]
  })"),
               ParseError);
  EXPECT_THROW(load_scenario_file("/nonexistent/scenario.json"), std::ios_base::failure);
}

TEST(LoadScenario, PropertyTotalOnMutatedDocuments) {
  // Random single-character mutations must load or raise a typed error, never crash.
  const std::string base = R"({"map": {"resolution": 0.05, "width": 40, "height": 40},
    "robot": {"start": [0.5, 0.5, 0], "goal": [1.5, 1.5]},
    "pedestrians": [{"id": 1, "pose": [1, 1, 0], "velocity": [0.1, 0], "emotion": "happy"}],
    "sim": {"dt": 0.1, "max_time": 5, "seed": 3}})";
  const std::string alphabet = "{}[]:,\"0123456789.-eE abc";
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 2000; ++i) {
    std::string doc = base;
    const int edits = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < edits; ++k) {
      doc[rng() % doc.size()] = alphabet[rng() % alphabet.size()];
    }
    try {
      (void)load_scenario(doc);
    } catch (const ParseError&) {
    } catch (const ValidationError&) {
    }
  }
}

TEST(LoadScenario, CanonicalScenariosLoad) {
  for (const char* name : {"canonical_happy", "canonical_neutral", "canonical_angry"}) {
    const Scenario s =
        load_scenario_file(std::string(SOCNAV_SCENARIO_DIR) + "/" + name + ".json");
    EXPECT_NEAR(s.map.extent().x(), 12.0, 1e-9);
    EXPECT_NEAR(s.map.extent().y(), 6.0, 1e-9);
    ASSERT_EQ(s.pedestrians.size(), 1u);
    EXPECT_EQ(s.pedestrians[0].pose.position, Vector2(6, 3));
    EXPECT_EQ(s.robot_start.position, Vector2(1, 3));
    EXPECT_EQ(s.goal, Vector2(11, 3));
  }
}

}  // namespace
}  // namespace socnav
