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

#ifndef SOCNAV_SENSING_HPP_
#define SOCNAV_SENSING_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "socnav/world.hpp"

namespace socnav {

struct RobotOutsideMap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScanConfig {
  static constexpr int kDefaultBeams = 720;

  int n_beams{kDefaultBeams};
  double angle_min{-std::numbers::pi};
  double angle_max{std::numbers::pi - 2.0 * std::numbers::pi / kDefaultBeams};
  double range_max{8.0};
  double range_noise_sigma{0.0};

  double angle_increment() const { return (angle_max - angle_min) / (n_beams - 1); }
  double beam_angle(int i) const { return angle_min + i * angle_increment(); }
  /// True when the beams wrap around to the first one (the scan covers a full turn).
  bool full_circle() const;
};

void validate(const ScanConfig& cfg);

struct LaserScan {
  ScanConfig config;
  Pose2D origin;
  std::vector<double> ranges;

  bool returned(std::size_t i) const { return ranges[i] < config.range_max; }
  double world_angle(std::size_t i) const {
    return origin.theta + config.beam_angle(static_cast<int>(i));
  }
  Vector2 endpoint(std::size_t i) const;
};

struct ScanCluster {
  std::vector<int> beams;  // consecutive indices, possibly wrapping past the last beam
  std::vector<Vector2> points;
  double width{0.0};

  Vector2 centroid() const;
};

enum class DetectionSource { LegPair, SingleLeg };

struct PersonDetection {
  Vector2 position{Vector2::Zero()};
  double confidence{0.0};
  DetectionSource source{DetectionSource::LegPair};

  bool operator==(const PersonDetection&) const = default;
};

struct LegCandidate {
  Vector2 position{Vector2::Zero()};
  double confidence{0.0};
  int beam{0};  // first beam of the originating cluster, used for tie-breaking
};

inline constexpr double kDefaultJumpThreshold = 0.13;
inline constexpr double kDefaultPairingDistance = 0.4;
inline constexpr double kLegWidthMin = 0.05;
inline constexpr double kLegWidthMax = 0.25;
inline constexpr double kLegWidthMargin = 0.05;
inline constexpr double kMinLegConfidence = 0.5;
inline constexpr std::size_t kMinClusterPoints = 3;

/// Distance along the ray to the first occupied cell, if one lies within max_range.
std::optional<double> raycast_grid(const GridMap& map, const Vector2& origin, double angle,
                                   double max_range);

/// Smallest positive ray parameter at which the ray meets the circle.
std::optional<double> raycast_circle(const Vector2& origin, const Vector2& direction,
                                     const Vector2& center, double radius);

LaserScan simulate_scan(const GridMap& map, const Pose2D& robot_pose,
                        std::span<const Pedestrian> peds, const ScanConfig& cfg,
                        std::uint64_t rng_seed);

std::vector<ScanCluster> cluster_scan(const LaserScan& scan,
                                      double jump_threshold = kDefaultJumpThreshold);

double classify_leg(double width);
inline double classify_leg(const ScanCluster& c) { return classify_leg(c.width); }

std::vector<PersonDetection> pair_legs(std::span<const LegCandidate> legs,
                                       double pairing_dist = kDefaultPairingDistance);

std::vector<PersonDetection> detect_people(const LaserScan& scan);

}  // namespace socnav

#endif  // SOCNAV_SENSING_HPP_
