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

#ifndef SOCNAV_WORLD_HPP_
#define SOCNAV_WORLD_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace socnav {

using Vector2 = Eigen::Vector2d;
using Cell = Eigen::Vector2i;  // (col, row)

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfBounds : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar normalize_angle(Scalar angle) {
  constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
  constexpr Scalar kTwoPi = 2 * kPi;
  angle = std::fmod(angle, kTwoPi);
  if (angle <= -kPi) {
    angle += kTwoPi;
  } else if (angle > kPi) {
    angle -= kTwoPi;
  }
  return angle;
}

template <typename Scalar>
struct Pose2 {
  using Vector = Eigen::Matrix<Scalar, 2, 1>;

  Vector position{Vector::Zero()};
  Scalar theta{0};

  Pose2() = default;
  Pose2(Scalar x, Scalar y, Scalar heading) : position{x, y}, theta{normalize_angle(heading)} {}
  Pose2(const Vector& p, Scalar heading) : position{p}, theta{normalize_angle(heading)} {}

  Scalar x() const { return position.x(); }
  Scalar y() const { return position.y(); }

  bool operator==(const Pose2& other) const {
    return position == other.position && theta == other.theta;
  }
};

using Pose2D = Pose2<double>;

struct Velocity {
  double linear{0.0};
  double angular{0.0};

  bool operator==(const Velocity&) const = default;
};

enum class Emotion { Happy, Neutral, Angry };

/// Personal-space radius in meters for each emotional state.
constexpr double proxemic_radius(Emotion e) {
  switch (e) {
    case Emotion::Happy:
      return 0.5;
    case Emotion::Neutral:
      return 1.0;
    case Emotion::Angry:
      return 1.5;
  }
  return 1.0;
}

std::string_view to_string(Emotion e);
Emotion emotion_from_string(std::string_view name);

/// Occupancy grid. Row 0 is the bottom edge (smallest y); cells are stored row-major.
class GridMap {
 public:
  GridMap(double resolution, int width, int height, Vector2 origin = Vector2::Zero());

  double resolution() const { return resolution_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const Vector2& origin() const { return origin_; }
  Vector2 extent() const { return {width_ * resolution_, height_ * resolution_}; }

  bool in_bounds(const Cell& c) const {
    return c.x() >= 0 && c.y() >= 0 && c.x() < width_ && c.y() < height_;
  }
  bool contains(const Vector2& p) const;

  bool occupied(const Cell& c) const { return cells_[index(c)] != 0; }
  void set_occupied(const Cell& c, bool value = true) { cells_[index(c)] = value ? 1 : 0; }

  std::size_t index(const Cell& c) const {
    return static_cast<std::size_t>(c.y()) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x());
  }

 private:
  double resolution_;
  int width_;
  int height_;
  Vector2 origin_;
  std::vector<std::uint8_t> cells_;
};

/// Cell containing a world position. Throws OutOfBounds outside the map.
Cell world_to_cell(const Vector2& p, const GridMap& map);

/// World position of a cell center. Throws OutOfBounds outside the map.
Vector2 cell_to_world(const Cell& c, const GridMap& map);

struct Pedestrian {
  static constexpr double kDefaultBodyRadius = 0.25;
  static constexpr double kDefaultLegRadius = 0.07;
  static constexpr double kDefaultLegSeparation = 0.25;

  int id{0};
  Pose2D pose;
  Velocity velocity;
  Emotion emotion{Emotion::Neutral};
  double body_radius{kDefaultBodyRadius};
  double leg_radius{kDefaultLegRadius};
  double leg_separation{kDefaultLegSeparation};

  /// Leg centers; the legs straddle the pose perpendicular to the heading.
  std::array<Vector2, 2> leg_centers() const;
};

struct RobotState {
  static constexpr double kDefaultFootprintRadius = 0.3;

  Pose2D pose;
  Velocity velocity;
  double footprint_radius{kDefaultFootprintRadius};
};

struct Scenario {
  static constexpr double kDefaultDt = 0.1;
  static constexpr double kDefaultMaxTime = 60.0;
  static constexpr double kDefaultGoalTolerance = 0.2;

  GridMap map{0.05, 1, 1};
  Pose2D robot_start;
  Vector2 goal{Vector2::Zero()};
  double footprint_radius{RobotState::kDefaultFootprintRadius};
  std::vector<Pedestrian> pedestrians;
  bool adaptation_enabled{true};
  double sim_dt{kDefaultDt};
  double max_sim_time{kDefaultMaxTime};
  double goal_tolerance{kDefaultGoalTolerance};
  std::uint64_t seed{0};
};

/// Checks scenario invariants, throwing ValidationError on the first violation.
void validate(const Scenario& s);

/// Parses and validates a JSON scenario document.
Scenario load_scenario(std::string_view text);
Scenario load_scenario_file(const std::string& path);

/// Unicycle update with exact arc integration over dt.
Pose2D integrate_arc(const Pose2D& pose, const Velocity& cmd, double dt);

RobotState step_robot(const RobotState& s, const Velocity& cmd, double dt);

/// Constant-velocity update; pedestrians ignore the robot.
std::vector<Pedestrian> step_pedestrians(const std::vector<Pedestrian>& peds, double dt);

}  // namespace socnav

#endif  // SOCNAV_WORLD_HPP_
