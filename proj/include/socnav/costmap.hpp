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

#ifndef SOCNAV_COSTMAP_HPP_
#define SOCNAV_COSTMAP_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "socnav/sensing.hpp"
#include "socnav/world.hpp"

namespace socnav {

using Cost = std::uint8_t;
using CostGrid = Eigen::Matrix<Cost, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr Cost kFreeCost = 0;
inline constexpr Cost kInscribedCost = 253;
inline constexpr Cost kLethalCost = 254;
inline constexpr int kMaxInflatedCost = 252;

struct WindowOutsideMap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cost grid sharing the geometry conventions of GridMap. Indexed costs(row, col).
class Costmap {
 public:
  Costmap(double resolution, int width, int height, Vector2 origin = Vector2::Zero());

  double resolution() const { return resolution_; }
  int width() const { return static_cast<int>(costs_.cols()); }
  int height() const { return static_cast<int>(costs_.rows()); }
  const Vector2& origin() const { return origin_; }

  bool in_bounds(const Cell& c) const {
    return c.x() >= 0 && c.y() >= 0 && c.x() < width() && c.y() < height();
  }
  bool contains(const Vector2& p) const;

  Cost at(const Cell& c) const { return costs_(c.y(), c.x()); }
  Cost& at(const Cell& c) { return costs_(c.y(), c.x()); }

  /// Cost at a world position; positions outside the grid read as lethal.
  Cost cost_at(const Vector2& p) const;

  Cell world_to_cell(const Vector2& p) const;
  Vector2 cell_to_world(const Cell& c) const;

  const CostGrid& costs() const { return costs_; }
  CostGrid& costs() { return costs_; }

  bool same_geometry(const Costmap& other) const;
  bool operator==(const Costmap& other) const {
    return same_geometry(other) && costs_ == other.costs_;
  }

 private:
  double resolution_;
  Vector2 origin_;
  CostGrid costs_;
};

struct SocialAgent {
  Vector2 position{Vector2::Zero()};
  double proxemic_radius{1.0};
  Emotion emotion{Emotion::Neutral};
};

struct LayerParams {
  double inflation_inscribed_radius{0.3};
  double inflation_decay{5.0};
  double inflation_cutoff{1.0};
  int social_amplitude{kInscribedCost};
  double social_cutoff_sigmas{3.0};
  double cost_weight{3.0};
};

void validate(const LayerParams& p);

Costmap build_static_layer(const GridMap& map);

/// Marks scan endpoints lethal and clears the cells each beam crosses before its endpoint.
/// Cells that are lethal in `static_layer` (same geometry as `cm`) are never cleared.
Costmap apply_obstacle_layer(const Costmap& cm, const LaserScan& scan,
                             const Costmap* static_layer = nullptr);

/// Inflation cost for a cell at distance d from the nearest lethal cell; 0 beyond the cutoff.
Cost inflation_cost(double d, const LayerParams& p);

Costmap apply_inflation_layer(const Costmap& cm, const LayerParams& p);

/// Gaussian personal-space cost with sigma = r_p / 2, truncated at `cutoff_sigmas` sigmas.
template <typename Scalar>
int social_cost(Scalar d, Scalar r_p, int amplitude, Scalar cutoff_sigmas = Scalar{3}) {
  const Scalar sigma = r_p / Scalar{2};
  if (d > cutoff_sigmas * sigma) {
    return 0;
  }
  return static_cast<int>(std::lround(amplitude * std::exp(-(d * d) / (Scalar{2} * sigma * sigma))));
}

SocialAgent emotion_to_agent(const PersonDetection& det, Emotion emotion, bool adaptation_enabled);

Costmap apply_social_layer(const Costmap& cm, std::span<const SocialAgent> agents,
                           const LayerParams& p);

/// Whole-map costmap for the global planner: static then inflation. Never carries social cost.
Costmap compose_global(const GridMap& map, const LayerParams& p);

/// As above plus the social layer of the detected people, so that replanning routes around
/// personal space. Still carries no scan obstacles.
Costmap compose_global(const GridMap& map, std::span<const PersonDetection> detections,
                       std::span<const Emotion> emotions, bool adaptation_enabled,
                       const LayerParams& p);

/// Square window of side 2 * window centered on the scan origin, aligned to the map grid and
/// clipped to its bounds: static, obstacle(scan), inflation, then social.
Costmap compose_local(const GridMap& map, const LaserScan& scan,
                      std::span<const PersonDetection> detections,
                      std::span<const Emotion> emotions, bool adaptation_enabled,
                      const LayerParams& p, double window);

/// Per-cell maximum of two costmaps with identical geometry.
Costmap max_compose(const Costmap& a, const Costmap& b);

void write_costmap(std::ostream& out, const Costmap& cm);
Costmap read_costmap(std::istream& in);

}  // namespace socnav

#endif  // SOCNAV_COSTMAP_HPP_
