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

#include "socnav/sensing.hpp"

#include <algorithm>
#include <random>
#include <tuple>

#include "socnav/grid.hpp"

namespace socnav {

namespace {

constexpr double kMinRange = 1e-3;

Vector2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

bool ScanConfig::full_circle() const {
  const double span = angle_max - angle_min + angle_increment();
  return std::abs(span - 2.0 * std::numbers::pi) < 1e-9;
}

void validate(const ScanConfig& cfg) {
  if (cfg.n_beams < 2 || !(cfg.angle_min < cfg.angle_max) || !(cfg.range_max > 0.0) ||
      !(cfg.range_noise_sigma >= 0.0)) {
    throw ValidationError("invalid scan configuration");
  }
}

Vector2 LaserScan::endpoint(std::size_t i) const {
  return origin.position + ranges[i] * unit(world_angle(i));
}

Vector2 ScanCluster::centroid() const {
  Vector2 sum = Vector2::Zero();
  for (const auto& p : points) {
    sum += p;
  }
  return points.empty() ? sum : Vector2(sum / static_cast<double>(points.size()));
}

std::optional<double> raycast_grid(const GridMap& map, const Vector2& origin, double angle,
                                   double max_range) {
  std::optional<double> hit;
  traverse_ray(map.origin(), map.resolution(), origin, unit(angle), max_range,
               [&](const Cell& c, double t) {
                 if (!map.in_bounds(c)) {
                   return false;
                 }
                 if (t > 0.0 && map.occupied(c)) {
                   hit = t;
                   return false;
                 }
                 return true;
               });
  if (hit && *hit > max_range) {
    return std::nullopt;
  }
  return hit;
}

std::optional<double> raycast_circle(const Vector2& origin, const Vector2& direction,
                                     const Vector2& center, double radius) {
  const Vector2 oc = origin - center;
  const double b = oc.dot(direction);
  const double c = oc.squaredNorm() - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) {
    return std::nullopt;
  }
  const double root = std::sqrt(disc);
  const double near = -b - root;
  if (near > 0.0) {
    return near;
  }
  const double far = -b + root;
  if (far > 0.0) {
    return far;
  }
  return std::nullopt;
}

LaserScan simulate_scan(const GridMap& map, const Pose2D& robot_pose,
                        std::span<const Pedestrian> peds, const ScanConfig& cfg,
                        std::uint64_t rng_seed) {
  validate(cfg);
  if (!map.contains(robot_pose.position)) {
    throw RobotOutsideMap("simulate_scan: robot pose outside map");
  }
  std::vector<std::array<Vector2, 2>> legs;
  std::vector<double> leg_radii;
  legs.reserve(peds.size());
  for (const auto& p : peds) {
    legs.push_back(p.leg_centers());
    leg_radii.push_back(p.leg_radius);
  }

  LaserScan scan{cfg, robot_pose, std::vector<double>(static_cast<std::size_t>(cfg.n_beams))};
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> noise(0.0, cfg.range_noise_sigma);

  for (int i = 0; i < cfg.n_beams; ++i) {
    const double angle = robot_pose.theta + cfg.beam_angle(i);
    const Vector2 dir = unit(angle);
    double range = cfg.range_max;
    if (const auto hit = raycast_grid(map, robot_pose.position, angle, cfg.range_max)) {
      range = std::min(range, *hit);
    }
    for (std::size_t k = 0; k < legs.size(); ++k) {
      for (const auto& center : legs[k]) {
        if (const auto t = raycast_circle(robot_pose.position, dir, center, leg_radii[k])) {
          range = std::min(range, *t);
        }
      }
    }
    if (cfg.range_noise_sigma > 0.0 && range < cfg.range_max) {
      range = std::clamp(range + noise(rng), kMinRange, cfg.range_max);
    }
    scan.ranges[static_cast<std::size_t>(i)] = std::max(range, kMinRange);
  }
  return scan;
}

std::vector<ScanCluster> cluster_scan(const LaserScan& scan, double jump_threshold) {
  const int n = static_cast<int>(scan.ranges.size());
  std::vector<ScanCluster> clusters;
  ScanCluster current;
  Vector2 previous = Vector2::Zero();

  const auto flush = [&] {
    if (!current.beams.empty()) {
      clusters.push_back(std::move(current));
    }
    current = ScanCluster{};
  };

  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (!scan.returned(idx)) {
      flush();
      continue;
    }
    const Vector2 p = scan.endpoint(idx);
    if (!current.beams.empty() && (p - previous).norm() >= jump_threshold) {
      flush();
    }
    current.beams.push_back(i);
    current.points.push_back(p);
    previous = p;
  }
  flush();

  // Join the clusters touching the seam of a full-turn scan.
  if (scan.config.full_circle() && clusters.size() >= 2 && clusters.front().beams.front() == 0 &&
      clusters.back().beams.back() == n - 1 &&
      (clusters.back().points.back() - clusters.front().points.front()).norm() < jump_threshold) {
    ScanCluster& last = clusters.back();
    ScanCluster& first = clusters.front();
    last.beams.insert(last.beams.end(), first.beams.begin(), first.beams.end());
    last.points.insert(last.points.end(), first.points.begin(), first.points.end());
    first = std::move(last);
    clusters.pop_back();
  }

  std::erase_if(clusters, [](const ScanCluster& c) { return c.points.size() < kMinClusterPoints; });
  for (auto& c : clusters) {
    double width = 0.0;
    for (std::size_t a = 0; a < c.points.size(); ++a) {
      for (std::size_t b = a + 1; b < c.points.size(); ++b) {
        width = std::max(width, (c.points[a] - c.points[b]).norm());
      }
    }
    c.width = width;
  }
  return clusters;
}

double classify_leg(double width) {
  if (width < kLegWidthMin) {
    return std::max(0.0, 1.0 - (kLegWidthMin - width) / kLegWidthMargin);
  }
  if (width > kLegWidthMax) {
    return std::max(0.0, 1.0 - (width - kLegWidthMax) / kLegWidthMargin);
  }
  return 1.0;
}

std::vector<PersonDetection> pair_legs(std::span<const LegCandidate> legs, double pairing_dist) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    if (legs[i].confidence >= kMinLegConfidence) {
      eligible.push_back(i);
    }
  }
  std::sort(eligible.begin(), eligible.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(legs[a].beam, a) < std::tie(legs[b].beam, b);
  });

  struct Pair {
    double distance;
    std::size_t first;  // positions in `eligible`, first < second
    std::size_t second;
  };
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < eligible.size(); ++a) {
    for (std::size_t b = a + 1; b < eligible.size(); ++b) {
      const double d = (legs[eligible[a]].position - legs[eligible[b]].position).norm();
      if (d <= pairing_dist) {
        pairs.push_back({d, a, b});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& l, const Pair& r) {
    return std::tie(l.distance, l.first, l.second) < std::tie(r.distance, r.first, r.second);
  });

  std::vector<bool> used(eligible.size(), false);
  std::vector<PersonDetection> out;
  for (const auto& p : pairs) {
    if (used[p.first] || used[p.second]) {
      continue;
    }
    used[p.first] = used[p.second] = true;
    const auto& l = legs[eligible[p.first]];
    const auto& r = legs[eligible[p.second]];
    out.push_back({0.5 * (l.position + r.position), 0.5 * (l.confidence + r.confidence),
                   DetectionSource::LegPair});
  }
  for (std::size_t a = 0; a < eligible.size(); ++a) {
    if (!used[a]) {
      const auto& l = legs[eligible[a]];
      out.push_back({l.position, 0.5 * l.confidence, DetectionSource::SingleLeg});
    }
  }
  return out;
}

std::vector<PersonDetection> detect_people(const LaserScan& scan) {
  std::vector<LegCandidate> legs;
  for (const auto& c : cluster_scan(scan, kDefaultJumpThreshold)) {
    legs.push_back({c.centroid(), classify_leg(c), c.beams.front()});
  }
  return pair_legs(legs, kDefaultPairingDistance);
}

}  // namespace socnav
