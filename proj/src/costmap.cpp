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

#include "socnav/costmap.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "socnav/grid.hpp"

namespace socnav {

namespace {

// Absorbs representation error when a distance lands exactly on a radius (0.05 * 6 != 0.3).
constexpr double kDistanceEpsilon = 1e-9;
// Endpoints are pushed this far past the hit so they fall inside the struck cell.
constexpr double kEndpointNudge = 1e-6;

}  // namespace

Costmap::Costmap(double resolution, int width, int height, Vector2 origin)
    : resolution_{resolution}, origin_{std::move(origin)} {
  if (!(resolution > 0.0) || width < 1 || height < 1) {
    throw ValidationError("Costmap: resolution must be positive and dimensions at least 1");
  }
  costs_ = CostGrid::Zero(height, width);
}

bool Costmap::contains(const Vector2& p) const {
  const Vector2 rel = (p - origin_) / resolution_;
  return rel.x() >= 0.0 && rel.y() >= 0.0 && std::floor(rel.x()) < width() &&
         std::floor(rel.y()) < height();
}

Cost Costmap::cost_at(const Vector2& p) const {
  if (!contains(p)) {
    return kLethalCost;
  }
  return at(world_to_cell(p));
}

Cell Costmap::world_to_cell(const Vector2& p) const {
  if (!contains(p)) {
    throw OutOfBounds("Costmap::world_to_cell: position outside costmap");
  }
  return ((p - origin_) / resolution_).array().floor().cast<int>();
}

Vector2 Costmap::cell_to_world(const Cell& c) const {
  if (!in_bounds(c)) {
    throw OutOfBounds("Costmap::cell_to_world: cell outside costmap");
  }
  return origin_ + (c.cast<double>().array() + 0.5).matrix() * resolution_;
}

bool Costmap::same_geometry(const Costmap& other) const {
  return resolution_ == other.resolution_ && origin_ == other.origin_ &&
         width() == other.width() && height() == other.height();
}

void validate(const LayerParams& p) {
  if (!(p.inflation_inscribed_radius > 0.0) || !(p.inflation_decay > 0.0) ||
      !(p.inflation_cutoff > 0.0) || !(p.social_cutoff_sigmas > 0.0) ||
      p.social_amplitude < 1 || p.social_amplitude > kInscribedCost || !(p.cost_weight >= 0.0)) {
    throw ValidationError("invalid layer parameters");
  }
}

Costmap build_static_layer(const GridMap& map) {
  Costmap cm(map.resolution(), map.width(), map.height(), map.origin());
  for (int row = 0; row < map.height(); ++row) {
    for (int col = 0; col < map.width(); ++col) {
      if (map.occupied(Cell{col, row})) {
        cm.costs()(row, col) = kLethalCost;
      }
    }
  }
  return cm;
}

Costmap apply_obstacle_layer(const Costmap& cm, const LaserScan& scan,
                             const Costmap* static_layer) {
  if (static_layer != nullptr && !static_layer->same_geometry(cm)) {
    throw ValidationError("apply_obstacle_layer: static layer geometry mismatch");
  }
  Costmap out = cm;
  const Vector2& origin = scan.origin.position;
  const auto is_static = [&](const Cell& c) {
    return static_layer != nullptr && static_layer->at(c) == kLethalCost;
  };

  std::vector<Cell> marks;
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double angle = scan.world_angle(i);
    const Vector2 dir{std::cos(angle), std::sin(angle)};
    const double range = scan.ranges[i];
    const Vector2 end = origin + (range + kEndpointNudge) * dir;
    const bool has_end = scan.returned(i) && out.contains(end);
    const Cell end_cell = has_end ? out.world_to_cell(end) : Cell{-1, -1};
    bool entered = false;
    traverse_ray(out.origin(), out.resolution(), origin, dir, range,
                 [&](const Cell& c, double) {
                   if (!out.in_bounds(c)) {
                     // The window is convex: once left after being inside, the ray never returns.
                     return !entered;
                   }
                   entered = true;
                   if (has_end && c == end_cell) {
                     return false;
                   }
                   if (!is_static(c)) {
                     out.at(c) = kFreeCost;
                   }
                   return true;
                 });
    if (has_end) {
      marks.push_back(end_cell);
    }
  }
  for (const auto& c : marks) {
    out.at(c) = kLethalCost;
  }
  return out;
}

Cost inflation_cost(double d, const LayerParams& p) {
  if (d <= p.inflation_inscribed_radius + kDistanceEpsilon) {
    return kInscribedCost;
  }
  if (d > p.inflation_cutoff + kDistanceEpsilon) {
    return kFreeCost;
  }
  const double factor = std::exp(-p.inflation_decay * (d - p.inflation_inscribed_radius));
  return static_cast<Cost>(std::lround(kMaxInflatedCost * factor));
}

namespace {

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

// Exact 1-D squared distance transform (lower envelope of parabolas) over integer samples.
// Unreached samples contribute no parabola.
void distance_transform_1d(std::vector<std::int64_t>& f) {
  const int n = static_cast<int>(f.size());
  std::vector<int> v;
  std::vector<double> z;
  v.reserve(f.size());
  z.reserve(f.size() + 1);
  for (int q = 0; q < n; ++q) {
    if (f[q] == kUnreached) {
      continue;
    }
    const auto intersect = [&](int a, int b) {
      return (static_cast<double>(f[b] + std::int64_t{b} * b) -
              static_cast<double>(f[a] + std::int64_t{a} * a)) /
             (2.0 * (b - a));
    };
    while (!v.empty() && intersect(v.back(), q) <= z.back()) {
      v.pop_back();
      z.pop_back();
    }
    z.push_back(v.empty() ? -std::numeric_limits<double>::infinity() : intersect(v.back(), q));
    v.push_back(q);
  }
  if (v.empty()) {
    return;
  }
  std::vector<std::int64_t> out(f.size());
  std::size_t k = 0;
  for (int q = 0; q < n; ++q) {
    while (k + 1 < v.size() && z[k + 1] < q) {
      ++k;
    }
    const std::int64_t dq = q - v[k];
    out[static_cast<std::size_t>(q)] = dq * dq + f[static_cast<std::size_t>(v[k])];
  }
  f = std::move(out);
}

}  // namespace

Costmap apply_inflation_layer(const Costmap& cm, const LayerParams& p) {
  Costmap out = cm;
  const int width = cm.width();
  const int height = cm.height();
  const double res = cm.resolution();

  // Squared distance in cells to the nearest lethal cell, exact in integers.
  std::vector<std::int64_t> dist2(static_cast<std::size_t>(width) * height, kUnreached);
  bool any_lethal = false;
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      if (cm.costs()(row, col) == kLethalCost) {
        dist2[static_cast<std::size_t>(row) * width + col] = 0;
        any_lethal = true;
      }
    }
  }
  if (!any_lethal) {
    return out;
  }
  std::vector<std::int64_t> line;
  for (int row = 0; row < height; ++row) {
    const auto begin = dist2.begin() + static_cast<std::ptrdiff_t>(row) * width;
    line.assign(begin, begin + width);
    distance_transform_1d(line);
    std::copy(line.begin(), line.end(), begin);
  }
  line.resize(static_cast<std::size_t>(height));
  for (int col = 0; col < width; ++col) {
    for (int row = 0; row < height; ++row) {
      line[static_cast<std::size_t>(row)] = dist2[static_cast<std::size_t>(row) * width + col];
    }
    distance_transform_1d(line);
    for (int row = 0; row < height; ++row) {
      const std::int64_t d2 = line[static_cast<std::size_t>(row)];
      if (d2 == kUnreached) {
        continue;
      }
      Cost& cost = out.costs()(row, col);
      cost = std::max(cost, inflation_cost(res * std::sqrt(static_cast<double>(d2)), p));
    }
  }
  return out;
}

SocialAgent emotion_to_agent(const PersonDetection& det, Emotion emotion, bool adaptation_enabled) {
  const Emotion assumed = adaptation_enabled ? emotion : Emotion::Neutral;
  return {det.position, proxemic_radius(assumed), emotion};
}

Costmap apply_social_layer(const Costmap& cm, std::span<const SocialAgent> agents,
                           const LayerParams& p) {
  Costmap out = cm;
  if (agents.empty()) {
    return out;
  }
  const double res = cm.resolution();
  for (const auto& agent : agents) {
    // Only cells within the Gaussian's cutoff can receive cost.
    const double reach = p.social_cutoff_sigmas * agent.proxemic_radius / 2.0;
    const Vector2 lo = (agent.position.array() - reach - cm.origin().array()) / res;
    const Vector2 hi = (agent.position.array() + reach - cm.origin().array()) / res;
    const int c0 = std::max(0, static_cast<int>(std::floor(lo.x())));
    const int r0 = std::max(0, static_cast<int>(std::floor(lo.y())));
    const int c1 = std::min(cm.width() - 1, static_cast<int>(std::floor(hi.x())));
    const int r1 = std::min(cm.height() - 1, static_cast<int>(std::floor(hi.y())));
    for (int row = r0; row <= r1; ++row) {
      for (int col = c0; col <= c1; ++col) {
        const Vector2 center = cm.origin() + Vector2(col + 0.5, row + 0.5) * res;
        const int c = social_cost((center - agent.position).norm(), agent.proxemic_radius,
                                  p.social_amplitude, p.social_cutoff_sigmas);
        Cost& cost = out.costs()(row, col);
        cost = std::max<Cost>(cost, static_cast<Cost>(c));
      }
    }
  }
  return out;
}

Costmap compose_global(const GridMap& map, const LayerParams& p) {
  validate(p);
  return apply_inflation_layer(build_static_layer(map), p);
}

namespace {

std::vector<SocialAgent> social_agents(std::span<const PersonDetection> detections,
                                       std::span<const Emotion> emotions,
                                       bool adaptation_enabled) {
  if (detections.size() != emotions.size()) {
    throw ValidationError("one emotion per detection required");
  }
  std::vector<SocialAgent> agents;
  agents.reserve(detections.size());
  for (std::size_t i = 0; i < detections.size(); ++i) {
    agents.push_back(emotion_to_agent(detections[i], emotions[i], adaptation_enabled));
  }
  return agents;
}

}  // namespace

Costmap compose_global(const GridMap& map, std::span<const PersonDetection> detections,
                       std::span<const Emotion> emotions, bool adaptation_enabled,
                       const LayerParams& p) {
  const auto agents = social_agents(detections, emotions, adaptation_enabled);
  return apply_social_layer(compose_global(map, p), agents, p);
}

Costmap compose_local(const GridMap& map, const LaserScan& scan,
                      std::span<const PersonDetection> detections,
                      std::span<const Emotion> emotions, bool adaptation_enabled,
                      const LayerParams& p, double window) {
  validate(p);
  if (!(window > 0.0)) {
    throw ValidationError("compose_local: window must be positive");
  }
  if (!map.contains(scan.origin.position)) {
    throw WindowOutsideMap("compose_local: robot outside map");
  }
  const Cell center = world_to_cell(scan.origin.position, map);
  const int half = static_cast<int>(std::lround(window / map.resolution()));
  const int c0 = std::max(0, center.x() - half);
  const int r0 = std::max(0, center.y() - half);
  const int c1 = std::min(map.width(), center.x() + half);
  const int r1 = std::min(map.height(), center.y() + half);

  Costmap static_layer(map.resolution(), c1 - c0, r1 - r0,
                       map.origin() + Vector2(c0, r0) * map.resolution());
  for (int row = r0; row < r1; ++row) {
    for (int col = c0; col < c1; ++col) {
      if (map.occupied(Cell{col, row})) {
        static_layer.costs()(row - r0, col - c0) = kLethalCost;
      }
    }
  }
  Costmap cm = apply_obstacle_layer(static_layer, scan, &static_layer);
  cm = apply_inflation_layer(cm, p);

  return apply_social_layer(cm, social_agents(detections, emotions, adaptation_enabled), p);
}

Costmap max_compose(const Costmap& a, const Costmap& b) {
  if (!a.same_geometry(b)) {
    throw ValidationError("max_compose: geometry mismatch");
  }
  Costmap out = a;
  out.costs() = a.costs().cwiseMax(b.costs());
  return out;
}

void write_costmap(std::ostream& out, const Costmap& cm) {
  char header[160];
  std::snprintf(header, sizeof(header), "%d %d %.9g %.9g %.9g\n", cm.width(), cm.height(),
                cm.resolution(), cm.origin().x(), cm.origin().y());
  out << header;
  for (int row = 0; row < cm.height(); ++row) {
    for (int col = 0; col < cm.width(); ++col) {
      if (col > 0) {
        out << ' ';
      }
      out << static_cast<int>(cm.costs()(row, col));
    }
    out << '\n';
  }
}

Costmap read_costmap(std::istream& in) {
  int width = 0;
  int height = 0;
  double res = 0.0;
  double ox = 0.0;
  double oy = 0.0;
  if (!(in >> width >> height >> res >> ox >> oy)) {
    throw ParseError("costmap: malformed header");
  }
  Costmap cm(res, width, height, Vector2{ox, oy});
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      int v = 0;
      if (!(in >> v) || v < 0 || v > kLethalCost) {
        throw ParseError("costmap: bad cell value at row " + std::to_string(row));
      }
      cm.costs()(row, col) = static_cast<Cost>(v);
    }
  }
  return cm;
}

}  // namespace socnav
