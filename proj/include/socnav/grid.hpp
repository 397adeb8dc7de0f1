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

#ifndef SOCNAV_GRID_HPP_
#define SOCNAV_GRID_HPP_

#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace socnav {

/// Amanatides-Woo traversal of the cells pierced by a ray.
///
/// Walks cells of a grid with the given origin and resolution, starting at the cell containing
/// `start` and moving along the unit vector `direction`. For every cell the visitor receives the
/// cell index and the distance (meters) at which the ray enters it; the start cell is reported with
/// distance 0. Traversal stops once the entry distance exceeds `max_length` or the visitor returns
/// false. Cells are reported without bounds checks.
template <typename Scalar, typename Visitor>
void traverse_ray(const Eigen::Matrix<Scalar, 2, 1>& grid_origin, Scalar resolution,
                  const Eigen::Matrix<Scalar, 2, 1>& start,
                  const Eigen::Matrix<Scalar, 2, 1>& direction, Scalar max_length,
                  Visitor&& visit) {
  constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();
  const Eigen::Matrix<Scalar, 2, 1> s = (start - grid_origin) / resolution;
  Eigen::Vector2i cell{static_cast<int>(std::floor(s.x())), static_cast<int>(std::floor(s.y()))};

  Eigen::Vector2i step;
  Eigen::Matrix<Scalar, 2, 1> t_max;
  Eigen::Matrix<Scalar, 2, 1> t_delta;
  for (int axis = 0; axis < 2; ++axis) {
    const Scalar d = direction[axis];
    if (d > 0) {
      step[axis] = 1;
      t_max[axis] = (static_cast<Scalar>(cell[axis] + 1) - s[axis]) / d;
      t_delta[axis] = Scalar{1} / d;
    } else if (d < 0) {
      step[axis] = -1;
      t_max[axis] = (static_cast<Scalar>(cell[axis]) - s[axis]) / d;
      t_delta[axis] = Scalar{-1} / d;
    } else {
      step[axis] = 0;
      t_max[axis] = kInf;
      t_delta[axis] = kInf;
    }
  }

  const Scalar limit = max_length / resolution;
  Scalar t_enter = 0;
  while (t_enter <= limit) {
    if (!visit(cell, t_enter * resolution)) {
      return;
    }
    const int axis = t_max.x() < t_max.y() ? 0 : 1;
    t_enter = t_max[axis];
    cell[axis] += step[axis];
    t_max[axis] += t_delta[axis];
  }
}

/// Visits the cells pierced by the segment from `from` to `to`, endpoints included.
template <typename Scalar, typename Visitor>
void traverse_segment(const Eigen::Matrix<Scalar, 2, 1>& grid_origin, Scalar resolution,
                      const Eigen::Matrix<Scalar, 2, 1>& from,
                      const Eigen::Matrix<Scalar, 2, 1>& to, Visitor&& visit) {
  const Eigen::Matrix<Scalar, 2, 1> delta = to - from;
  const Scalar length = delta.norm();
  if (length == 0) {
    const Eigen::Matrix<Scalar, 2, 1> s = (from - grid_origin) / resolution;
    visit(Eigen::Vector2i{static_cast<int>(std::floor(s.x())), static_cast<int>(std::floor(s.y()))},
          Scalar{0});
    return;
  }
  traverse_ray(grid_origin, resolution, from, Eigen::Matrix<Scalar, 2, 1>(delta / length), length,
               [&](const Eigen::Vector2i& c, Scalar t) {
                 return t < length ? visit(c, t) : false;
               });
}

}  // namespace socnav

#endif  // SOCNAV_GRID_HPP_
