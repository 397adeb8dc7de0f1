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

#include "socnav/world.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace socnav {

namespace {

constexpr double kStraightLineThreshold = 1e-6;
constexpr std::size_t kMaxCells = 50'000'000;

using nlohmann::json;

double finite_number(const json& j, const char* what) {
  if (!j.is_number()) {
    throw ParseError(std::string(what) + ": expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw ParseError(std::string(what) + ": not finite");
  }
  return v;
}

std::vector<double> number_array(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw ParseError(std::string(what) + ": expected an array of " + std::to_string(n) +
                     " numbers");
  }
  std::vector<double> out;
  out.reserve(n);
  for (const auto& e : j) {
    out.push_back(finite_number(e, what));
  }
  return out;
}

double number_or(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  return finite_number(obj.at(key), key);
}

int cell_count(const json& j, const char* what) {
  const double v = finite_number(j, what);
  if (v != std::floor(v) || v < 1.0 || v > 1e6) {
    throw ValidationError(std::string(what) + ": must be a positive integer cell count");
  }
  return static_cast<int>(v);
}

Vector2 origin_from(const json& m) {
  if (!m.contains("origin")) {
    return Vector2::Zero();
  }
  const auto o = number_array(m.at("origin"), 2, "map.origin");
  return {o[0], o[1]};
}

void check_size(int width, int height) {
  if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) > kMaxCells) {
    throw ValidationError("map: too many cells");
  }
}

double resolution_from(const json& m, double fallback) {
  const double res = number_or(m, "resolution", fallback);
  if (res <= 0.0) {
    throw ValidationError("map.resolution must be positive");
  }
  return res;
}

// ASCII rows are listed top (largest y) first; each character expands to scale x scale cells.
GridMap parse_ascii_map(const json& m) {
  const json& rows = m.at("ascii");
  if (!rows.is_array() || rows.empty()) {
    throw ParseError("map.ascii: expected a non-empty array of strings");
  }
  int scale = 1;
  if (m.contains("scale")) {
    scale = cell_count(m.at("scale"), "map.scale");
  }
  const double res = resolution_from(m, 0.05);
  std::size_t columns = 0;
  for (const auto& row : rows) {
    if (!row.is_string()) {
      throw ParseError("map.ascii: rows must be strings");
    }
    const auto& s = row.get_ref<const std::string&>();
    if (columns == 0) {
      columns = s.size();
    }
    if (s.empty() || s.size() != columns) {
      throw ParseError("map.ascii: rows must be non-empty and equally long");
    }
  }
  const int n_rows = static_cast<int>(rows.size());
  const int width = static_cast<int>(columns) * scale;
  const int height = n_rows * scale;
  check_size(width, height);
  GridMap map(res, width, height, origin_from(m));
  for (int r = 0; r < n_rows; ++r) {
    const auto& s = rows[static_cast<std::size_t>(r)].get_ref<const std::string&>();
    for (std::size_t c = 0; c < columns; ++c) {
      if (s[c] != '#' && s[c] != '.') {
        throw ParseError("map.ascii: only '#' and '.' are allowed");
      }
      if (s[c] != '#') {
        continue;
      }
      const int base_row = (n_rows - 1 - r) * scale;
      const int base_col = static_cast<int>(c) * scale;
      for (int dr = 0; dr < scale; ++dr) {
        for (int dc = 0; dc < scale; ++dc) {
          map.set_occupied(Cell{base_col + dc, base_row + dr});
        }
      }
    }
  }
  return map;
}

GridMap parse_inline_map(const json& m) {
  if (!m.contains("width") || !m.contains("height")) {
    throw ParseError("map: expected width and height (or ascii)");
  }
  const double res = resolution_from(m, 0.05);
  const int width = cell_count(m.at("width"), "map.width");
  const int height = cell_count(m.at("height"), "map.height");
  check_size(width, height);
  GridMap map(res, width, height, origin_from(m));
  if (m.contains("occupied")) {
    const json& occ = m.at("occupied");
    if (!occ.is_array()) {
      throw ParseError("map.occupied: expected an array of [col,row]");
    }
    for (const auto& e : occ) {
      const auto cr = number_array(e, 2, "map.occupied");
      const Cell c{static_cast<int>(cr[0]), static_cast<int>(cr[1])};
      if (cr[0] != c.x() || cr[1] != c.y() || !map.in_bounds(c)) {
        throw ValidationError("map.occupied: cell outside the grid");
      }
      map.set_occupied(c);
    }
  }
  return map;
}

Pedestrian parse_pedestrian(const json& p, std::size_t index) {
  if (!p.is_object()) {
    throw ParseError("pedestrians: entries must be objects");
  }
  Pedestrian ped;
  ped.id = static_cast<int>(index);
  if (p.contains("id")) {
    const double id = finite_number(p.at("id"), "pedestrian.id");
    if (id != std::floor(id) || std::abs(id) > 1e9) {
      throw ValidationError("pedestrian.id must be an integer");
    }
    ped.id = static_cast<int>(id);
  }
  if (!p.contains("pose")) {
    throw ParseError("pedestrian.pose is required");
  }
  const auto pose = number_array(p.at("pose"), 3, "pedestrian.pose");
  ped.pose = Pose2D{pose[0], pose[1], pose[2]};
  if (p.contains("velocity")) {
    const auto vel = number_array(p.at("velocity"), 2, "pedestrian.velocity");
    ped.velocity = {vel[0], vel[1]};
  }
  if (p.contains("emotion")) {
    if (!p.at("emotion").is_string()) {
      throw ParseError("pedestrian.emotion must be a string");
    }
    ped.emotion = emotion_from_string(p.at("emotion").get_ref<const std::string&>());
  }
  ped.body_radius = number_or(p, "body_radius", ped.body_radius);
  ped.leg_radius = number_or(p, "leg_radius", ped.leg_radius);
  ped.leg_separation = number_or(p, "leg_separation", ped.leg_separation);
  if (ped.body_radius <= 0.0 || ped.leg_radius <= 0.0 ||
      ped.leg_separation <= 2.0 * ped.leg_radius) {
    throw ValidationError("pedestrian " + std::to_string(ped.id) + ": invalid body geometry");
  }
  return ped;
}

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) {
    throw ParseError("scenario: expected a JSON object");
  }
  if (!doc.contains("map") || !doc.at("map").is_object()) {
    throw ParseError("scenario: missing map object");
  }
  const json& m = doc.at("map");
  Scenario s;
  s.map = m.contains("ascii") ? parse_ascii_map(m) : parse_inline_map(m);

  if (!doc.contains("robot") || !doc.at("robot").is_object()) {
    throw ParseError("scenario: missing robot object");
  }
  const json& robot = doc.at("robot");
  if (!robot.contains("start") || !robot.contains("goal")) {
    throw ParseError("robot: start and goal are required");
  }
  const auto start = number_array(robot.at("start"), 3, "robot.start");
  s.robot_start = Pose2D{start[0], start[1], start[2]};
  const auto goal = number_array(robot.at("goal"), 2, "robot.goal");
  s.goal = Vector2{goal[0], goal[1]};
  s.footprint_radius = number_or(robot, "footprint_radius", s.footprint_radius);

  if (doc.contains("pedestrians")) {
    const json& peds = doc.at("pedestrians");
    if (!peds.is_array()) {
      throw ParseError("pedestrians: expected an array");
    }
    for (std::size_t i = 0; i < peds.size(); ++i) {
      s.pedestrians.push_back(parse_pedestrian(peds[i], i));
    }
  }
  if (doc.contains("adaptation_enabled")) {
    if (!doc.at("adaptation_enabled").is_boolean()) {
      throw ParseError("adaptation_enabled must be a boolean");
    }
    s.adaptation_enabled = doc.at("adaptation_enabled").get<bool>();
  }
  if (doc.contains("sim")) {
    const json& sim = doc.at("sim");
    if (!sim.is_object()) {
      throw ParseError("sim: expected an object");
    }
    s.sim_dt = number_or(sim, "dt", s.sim_dt);
    s.max_sim_time = number_or(sim, "max_time", s.max_sim_time);
    s.goal_tolerance = number_or(sim, "goal_tolerance", s.goal_tolerance);
    if (sim.contains("seed")) {
      const json& seed = sim.at("seed");
      if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
        throw ParseError("sim.seed must be a non-negative integer");
      }
      s.seed = seed.get<std::uint64_t>();
    }
  }
  validate(s);
  return s;
}

}  // namespace

std::string_view to_string(Emotion e) {
  switch (e) {
    case Emotion::Happy:
      return "happy";
    case Emotion::Neutral:
      return "neutral";
    case Emotion::Angry:
      return "angry";
  }
  return "neutral";
}

Emotion emotion_from_string(std::string_view name) {
  if (name == "happy") {
    return Emotion::Happy;
  }
  if (name == "neutral") {
    return Emotion::Neutral;
  }
  if (name == "angry") {
    return Emotion::Angry;
  }
  throw ParseError("unknown emotion '" + std::string(name) + "'");
}

GridMap::GridMap(double resolution, int width, int height, Vector2 origin)
    : resolution_{resolution}, width_{width}, height_{height}, origin_{std::move(origin)} {
  if (!(resolution > 0.0) || width < 1 || height < 1) {
    throw ValidationError("GridMap: resolution must be positive and dimensions at least 1");
  }
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

bool GridMap::contains(const Vector2& p) const {
  const Vector2 rel = (p - origin_) / resolution_;
  return rel.x() >= 0.0 && rel.y() >= 0.0 && std::floor(rel.x()) < width_ &&
         std::floor(rel.y()) < height_;
}

Cell world_to_cell(const Vector2& p, const GridMap& map) {
  if (!map.contains(p)) {
    throw OutOfBounds("world_to_cell: position outside map");
  }
  const Vector2 rel = ((p - map.origin()) / map.resolution()).array().floor();
  return rel.cast<int>();
}

Vector2 cell_to_world(const Cell& c, const GridMap& map) {
  if (!map.in_bounds(c)) {
    throw OutOfBounds("cell_to_world: cell outside map");
  }
  return map.origin() + (c.cast<double>().array() + 0.5).matrix() * map.resolution();
}

std::array<Vector2, 2> Pedestrian::leg_centers() const {
  const Vector2 lateral{-std::sin(pose.theta), std::cos(pose.theta)};
  const Vector2 offset = 0.5 * leg_separation * lateral;
  return {pose.position + offset, pose.position - offset};
}

void validate(const Scenario& s) {
  if (!(s.sim_dt > 0.0)) {
    throw ValidationError("sim.dt must be positive");
  }
  if (!(s.max_sim_time > 0.0)) {
    throw ValidationError("sim.max_time must be positive");
  }
  if (!(s.goal_tolerance > 0.0)) {
    throw ValidationError("sim.goal_tolerance must be positive");
  }
  if (!(s.footprint_radius > 0.0)) {
    throw ValidationError("robot.footprint_radius must be positive");
  }
  if (!s.map.contains(s.robot_start.position)) {
    throw ValidationError("robot.start is outside the map");
  }
  if (s.map.occupied(world_to_cell(s.robot_start.position, s.map))) {
    throw ValidationError("robot.start is on an occupied cell");
  }
  if (!s.map.contains(s.goal)) {
    throw ValidationError("robot.goal is outside the map");
  }
  if (s.map.occupied(world_to_cell(s.goal, s.map))) {
    throw ValidationError("robot.goal is on an occupied cell");
  }
}

Scenario load_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scenario JSON: ") + e.what());
  }
  try {
    return parse_scenario(doc);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario schema error: ") + e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::ios_base::failure("cannot open scenario file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_scenario(buffer.str());
}

Pose2D integrate_arc(const Pose2D& pose, const Velocity& cmd, double dt) {
  const double v = cmd.linear;
  const double w = cmd.angular;
  const double theta = pose.theta;
  if (std::abs(w) < kStraightLineThreshold) {
    return Pose2D{pose.x() + v * dt * std::cos(theta), pose.y() + v * dt * std::sin(theta),
                  theta + w * dt};
  }
  const double r = v / w;
  const double next = theta + w * dt;
  return Pose2D{pose.x() + r * (std::sin(next) - std::sin(theta)),
                pose.y() - r * (std::cos(next) - std::cos(theta)), next};
}

RobotState step_robot(const RobotState& s, const Velocity& cmd, double dt) {
  RobotState out = s;
  out.pose = integrate_arc(s.pose, cmd, dt);
  out.velocity = cmd;
  return out;
}

std::vector<Pedestrian> step_pedestrians(const std::vector<Pedestrian>& peds, double dt) {
  std::vector<Pedestrian> out = peds;
  for (auto& p : out) {
    p.pose = integrate_arc(p.pose, p.velocity, dt);
  }
  return out;
}

}  // namespace socnav
