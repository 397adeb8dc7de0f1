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

#ifndef SOCNAV_SVG_HPP_
#define SOCNAV_SVG_HPP_

#include <string>
#include <vector>

#include "socnav/controller.hpp"
#include "socnav/world.hpp"

namespace socnav {

/// One executed run drawn on a path plot.
struct PathTrace {
  std::string label;
  const RunLog* log{nullptr};
  bool adaptation_enabled{true};
};

/// Top-down plot: walls, thin global path, thick trajectory, pedestrians as filled circles
/// with their effective proxemic radius dashed. Axes in meters.
std::string path_plot_svg(const Scenario& scenario, const std::vector<PathTrace>& traces);

/// One SII-vs-time panel per run, side by side: threshold in blue, measured peak SII in red.
struct SiiPanel {
  std::string title;
  const RunLog* log{nullptr};
};

std::string sii_plot_svg(const std::vector<SiiPanel>& panels);

}  // namespace socnav

#endif  // SOCNAV_SVG_HPP_
