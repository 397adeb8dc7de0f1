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

#include "socnav/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>

namespace socnav {

namespace {

constexpr double kPixelsPerMeter = 60.0;
constexpr double kMargin = 50.0;
constexpr const char* kTraceColors[] = {"#1b7837", "#c51b7d", "#2166ac", "#e08214"};

void appendf(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  const int n = std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  if (n >= static_cast<int>(sizeof(buf))) {
    std::string big(static_cast<std::size_t>(n) + 1, '\0');
    va_start(args, fmt);
    std::vsnprintf(big.data(), big.size(), fmt, args);
    va_end(args);
    big.pop_back();
    out += big;
    return;
  }
  out.append(buf, static_cast<std::size_t>(std::max(n, 0)));
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

void open_svg(std::string& out, double width, double height) {
  appendf(out,
          "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
          "viewBox=\"0 0 %.0f %.0f\" font-family=\"sans-serif\" font-size=\"12\">\n"
          "<rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" fill=\"white\"/>\n",
          width, height, width, height, width, height);
}

// Affine map from plot coordinates to pixels, y up.
struct Frame {
  double x0, y0;      // pixel position of the plot's lower-left corner
  double sx, sy;      // pixels per unit
  double xmin, ymin;  // plot coordinates of the lower-left corner

  double px(double x) const { return x0 + (x - xmin) * sx; }
  double py(double y) const { return y0 - (y - ymin) * sy; }
};

void polyline(std::string& out, const Frame& f, const std::vector<Vector2>& pts,
              const char* color, double width, const char* extra = "") {
  if (pts.empty()) {
    return;
  }
  appendf(out, "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"%.1f\"%s points=\"", color,
          width, extra);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    appendf(out, "%s%.2f,%.2f", i == 0 ? "" : " ", f.px(pts[i].x()), f.py(pts[i].y()));
  }
  out += "\"/>\n";
}

double tick_step(double span) {
  if (span <= 2.0) {
    return 0.5;
  }
  if (span <= 12.0) {
    return 1.0;
  }
  if (span <= 30.0) {
    return 5.0;
  }
  return 10.0;
}

void axes(std::string& out, const Frame& f, double xmax, double ymax, double xstep,
          double ystep, const char* xlabel, const char* ylabel) {
  const double left = f.px(f.xmin);
  const double right = f.px(xmax);
  const double bottom = f.py(f.ymin);
  const double top = f.py(ymax);
  appendf(out,
          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" "
          "stroke=\"black\" stroke-width=\"1\"/>\n",
          left, top, right - left, bottom - top);
  const int nx = static_cast<int>(std::floor((xmax - f.xmin) / xstep + 1e-9));
  for (int i = 0; i <= nx; ++i) {
    const double x = f.xmin + i * xstep;
    appendf(out,
            "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n"
            "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%g</text>\n",
            f.px(x), bottom, f.px(x), bottom + 4, f.px(x), bottom + 16, x);
  }
  const int ny = static_cast<int>(std::floor((ymax - f.ymin) / ystep + 1e-9));
  for (int i = 0; i <= ny; ++i) {
    const double y = f.ymin + i * ystep;
    appendf(out,
            "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n"
            "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%g</text>\n",
            left - 4, f.py(y), left, f.py(y), left - 6, f.py(y) + 4, y);
  }
  appendf(out,
          "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%s</text>\n"
          "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\" "
          "transform=\"rotate(-90 %.2f %.2f)\">%s</text>\n",
          (left + right) / 2, bottom + 34, xlabel, left - 36, (top + bottom) / 2, left - 36,
          (top + bottom) / 2, ylabel);
}

}  // namespace

std::string path_plot_svg(const Scenario& scenario, const std::vector<PathTrace>& traces) {
  const GridMap& map = scenario.map;
  const Vector2 extent = map.extent();
  const double width = extent.x() * kPixelsPerMeter + 2 * kMargin;
  const double height = extent.y() * kPixelsPerMeter + 2 * kMargin + 20.0 * traces.size();
  const Frame f{kMargin, kMargin + extent.y() * kPixelsPerMeter, kPixelsPerMeter,
                kPixelsPerMeter, map.origin().x(), map.origin().y()};

  std::string out;
  open_svg(out, width, height);

  // Walls as horizontal runs of occupied cells.
  out += "<g fill=\"#404040\" stroke=\"none\">\n";
  const double res = map.resolution();
  for (int row = 0; row < map.height(); ++row) {
    int col = 0;
    while (col < map.width()) {
      if (!map.occupied({col, row})) {
        ++col;
        continue;
      }
      const int begin = col;
      while (col < map.width() && map.occupied({col, row})) {
        ++col;
      }
      const double x = map.origin().x() + begin * res;
      const double y = map.origin().y() + (row + 1) * res;
      appendf(out, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\"/>\n", f.px(x),
              f.py(y), (col - begin) * res * kPixelsPerMeter, res * kPixelsPerMeter);
    }
  }
  out += "</g>\n";

  // Pedestrian tracks follow the same deterministic motion the simulation used.
  std::size_t steps = 0;
  for (const auto& t : traces) {
    steps = std::max(steps, t.log->poses.size());
  }
  std::vector<std::vector<Vector2>> ped_tracks(scenario.pedestrians.size());
  std::vector<Pedestrian> peds = scenario.pedestrians;
  for (std::size_t s = 0; s < std::max<std::size_t>(steps, 1); ++s) {
    for (std::size_t i = 0; i < peds.size(); ++i) {
      ped_tracks[i].push_back(peds[i].pose.position);
    }
    peds = step_pedestrians(peds, scenario.sim_dt);
  }
  for (std::size_t i = 0; i < scenario.pedestrians.size(); ++i) {
    const Pedestrian& p = scenario.pedestrians[i];
    polyline(out, f, ped_tracks[i], "#808080", 1.0, " stroke-dasharray=\"2 3\"");
    const Vector2 at = ped_tracks[i].front();
    appendf(out,
            "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"#f4a582\" stroke=\"black\"/>\n",
            f.px(at.x()), f.py(at.y()), p.body_radius * kPixelsPerMeter);
    std::vector<double> radii;
    for (const auto& t : traces) {
      const double r = proxemic_radius(t.adaptation_enabled ? p.emotion : Emotion::Neutral);
      if (std::find(radii.begin(), radii.end(), r) == radii.end()) {
        radii.push_back(r);
      }
    }
    if (radii.empty()) {
      radii.push_back(proxemic_radius(p.emotion));
    }
    for (const double r : radii) {
      appendf(out,
              "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" stroke=\"#b2182b\" "
              "stroke-dasharray=\"6 4\"/>\n",
              f.px(at.x()), f.py(at.y()), r * kPixelsPerMeter);
    }
    appendf(out, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%d %s</text>\n",
            f.px(at.x()), f.py(at.y()) - p.body_radius * kPixelsPerMeter - 4, p.id,
            std::string(to_string(p.emotion)).c_str());
  }

  for (std::size_t k = 0; k < traces.size(); ++k) {
    const RunLog& log = *traces[k].log;
    const char* color = kTraceColors[k % std::size(kTraceColors)];
    polyline(out, f, log.initial_path.waypoints, color, 1.0, " stroke-opacity=\"0.6\"");
    std::vector<Vector2> trajectory;
    trajectory.reserve(log.poses.size());
    for (const auto& p : log.poses) {
      trajectory.push_back(p.position);
    }
    polyline(out, f, trajectory, color, 3.0);
  }

  appendf(out,
          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"#2166ac\"/>\n"
          "<text x=\"%.2f\" y=\"%.2f\">start</text>\n"
          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"#b2182b\"/>\n"
          "<text x=\"%.2f\" y=\"%.2f\">goal</text>\n",
          f.px(scenario.robot_start.x()), f.py(scenario.robot_start.y()),
          f.px(scenario.robot_start.x()) + 7, f.py(scenario.robot_start.y()) - 7,
          f.px(scenario.goal.x()), f.py(scenario.goal.y()), f.px(scenario.goal.x()) + 7,
          f.py(scenario.goal.y()) - 7);

  axes(out, f, f.xmin + extent.x(), f.ymin + extent.y(), tick_step(extent.x()),
       tick_step(extent.y()), "x [m]", "y [m]");

  const double legend_y = f.py(f.ymin) + 50;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const double y = legend_y + 20.0 * k;
    appendf(out,
            "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
            "stroke-width=\"3\"/>\n<text x=\"%.2f\" y=\"%.2f\">%s</text>\n",
            kMargin, y, kMargin + 30, y, kTraceColors[k % std::size(kTraceColors)],
            kMargin + 36, y + 4, escape(traces[k].label).c_str());
  }
  out += "</svg>\n";
  return out;
}

std::string sii_plot_svg(const std::vector<SiiPanel>& panels) {
  constexpr double kPanelWidth = 420.0;
  constexpr double kPanelHeight = 260.0;
  constexpr double kGap = 70.0;
  const double width = 2 * kMargin + panels.size() * kPanelWidth +
                       (panels.empty() ? 0.0 : (panels.size() - 1) * kGap);
  const double height = kPanelHeight + 2 * kMargin + 20;

  double t_max = 1.0;
  for (const auto& p : panels) {
    if (!p.log->times.empty()) {
      t_max = std::max(t_max, p.log->times.back());
    }
  }
  const double t_step = tick_step(t_max);
  t_max = std::ceil(t_max / t_step - 1e-9) * t_step;

  std::string out;
  open_svg(out, width, height);
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const RunLog& log = *panels[k].log;
    const double left = kMargin + k * (kPanelWidth + kGap);
    const Frame f{left, kMargin + kPanelHeight, kPanelWidth / t_max, kPanelHeight, 0.0, 0.0};
    std::vector<Vector2> measured;
    measured.reserve(log.times.size());
    for (std::size_t i = 0; i < log.times.size(); ++i) {
      double s = 0.0;
      for (const auto& p : log.safety[i].people) {
        s = std::max(s, p.sii);
      }
      measured.emplace_back(log.times[i], s);
    }
    const double th = sii_threshold();
    polyline(out, f, {{0.0, th}, {t_max, th}}, "blue", 1.5);
    polyline(out, f, measured, "red", 2.0);
    axes(out, f, t_max, 1.0, t_step, 0.25, "t [s]", "SII");
    appendf(out, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%s</text>\n",
            left + kPanelWidth / 2, kMargin - 12, escape(panels[k].title).c_str());
  }
  out += "</svg>\n";
  return out;
}

}  // namespace socnav
