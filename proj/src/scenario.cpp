// Copyright 2026 The relsim Authors
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

#include "relsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace relsim
{

using nlohmann::json;

int SimConfig::horizon_steps() const
{
  return static_cast<int>(std::lround(horizon_seconds / step_seconds));
}

const char * to_string(AgentKind kind)
{
  switch (kind) {
    case AgentKind::kVehicle:
      return "vehicle";
    case AgentKind::kPedestrian:
      return "pedestrian";
    case AgentKind::kCyclist:
      return "cyclist";
  }
  return "unknown";
}

const char * to_string(MapFeatureType type)
{
  switch (type) {
    case MapFeatureType::kLaneCenterline:
      return "lane_centerline";
    case MapFeatureType::kRoadEdge:
      return "road_edge";
    case MapFeatureType::kCrosswalk:
      return "crosswalk";
  }
  return "unknown";
}

const char * to_string(ScenarioErrorCode code)
{
  switch (code) {
    case ScenarioErrorCode::kSchema:
      return "schema violation";
    case ScenarioErrorCode::kInvalidValue:
      return "invalid value";
    case ScenarioErrorCode::kDuplicateId:
      return "duplicate agent id";
    case ScenarioErrorCode::kMissingEgo:
      return "missing ego";
    case ScenarioErrorCode::kLengthMismatch:
      return "length mismatch";
  }
  return "unknown";
}

const AgentRecord & Scenario::agent(std::string_view agent_id) const
{
  for (const auto & a : agents) {
    if (a.id == agent_id) {
      return a;
    }
  }
  throw std::out_of_range("unknown agent id '" + std::string(agent_id) + "'");
}

bool Scenario::has_agent(std::string_view agent_id) const
{
  for (const auto & a : agents) {
    if (a.id == agent_id) {
      return true;
    }
  }
  return false;
}

namespace
{

void check_state(const AgentState & s, const std::string & where)
{
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.heading) ||
      !std::isfinite(s.speed)) {
    throw ScenarioError(ScenarioErrorCode::kInvalidValue, where + ": non-finite state");
  }
  if (s.speed < 0.0) {
    throw ScenarioError(ScenarioErrorCode::kInvalidValue, where + ": negative speed");
  }
}

AgentKind parse_kind(const std::string & s)
{
  if (s == "vehicle") return AgentKind::kVehicle;
  if (s == "pedestrian") return AgentKind::kPedestrian;
  if (s == "cyclist") return AgentKind::kCyclist;
  throw ScenarioError(ScenarioErrorCode::kSchema, "unknown agent kind '" + s + "'");
}

MapFeatureType parse_feature(const std::string & s)
{
  if (s == "lane_centerline") return MapFeatureType::kLaneCenterline;
  if (s == "road_edge") return MapFeatureType::kRoadEdge;
  if (s == "crosswalk") return MapFeatureType::kCrosswalk;
  throw ScenarioError(ScenarioErrorCode::kSchema, "unknown map feature type '" + s + "'");
}

AgentState state_from_json(const json & j)
{
  return {
    j.at("x").get<double>(), j.at("y").get<double>(),
    normalize_angle(j.at("heading").get<double>()), j.at("speed").get<double>()};
}

json state_to_json(const AgentState & s)
{
  json j;
  j["x"] = s.x;
  j["y"] = s.y;
  j["heading"] = s.heading;
  j["speed"] = s.speed;
  return j;
}

Scenario scenario_from_json(const json & doc)
{
  Scenario sc;
  sc.id = doc.at("id").get<std::string>();
  const json & cfg = doc.at("config");
  sc.config.step_seconds = cfg.at("step_seconds").get<double>();
  sc.config.observed_seconds = cfg.at("observed_seconds").get<double>();
  sc.config.horizon_seconds = cfg.at("horizon_seconds").get<double>();
  sc.ego_id = doc.at("ego_id").get<std::string>();
  for (const json & m : doc.at("map")) {
    MapPolyline line;
    line.type = parse_feature(m.at("type").get<std::string>());
    for (const json & p : m.at("points")) {
      if (!p.is_array() || p.size() != 2) {
        throw ScenarioError(ScenarioErrorCode::kSchema, "map point must be [x, y]");
      }
      line.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    sc.map.push_back(std::move(line));
  }
  for (const json & a : doc.at("agents")) {
    AgentRecord rec;
    rec.id = a.at("id").get<std::string>();
    rec.kind = parse_kind(a.at("kind").get<std::string>());
    rec.length = a.at("length").get<double>();
    rec.width = a.at("width").get<double>();
    for (const json & s : a.at("observed")) {
      rec.observed.push_back(state_from_json(s));
    }
    for (const json & s : a.at("reference_future")) {
      rec.reference_future.push_back(state_from_json(s));
    }
    sc.agents.push_back(std::move(rec));
  }
  return sc;
}

}  // namespace

void validate_scenario(const Scenario & sc)
{
  const SimConfig & cfg = sc.config;
  if (!(cfg.step_seconds > 0.0) || !std::isfinite(cfg.step_seconds)) {
    throw ScenarioError(ScenarioErrorCode::kInvalidValue, "step_seconds must be positive");
  }
  if (!(cfg.observed_seconds >= 0.0) || !std::isfinite(cfg.observed_seconds)) {
    throw ScenarioError(ScenarioErrorCode::kInvalidValue, "observed_seconds must be nonnegative");
  }
  const double ratio = cfg.horizon_seconds / cfg.step_seconds;
  if (!(cfg.horizon_seconds > 0.0) || !std::isfinite(ratio) ||
      std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0) {
    throw ScenarioError(
      ScenarioErrorCode::kInvalidValue,
      "horizon_seconds must be a positive multiple of step_seconds");
  }
  const int horizon = cfg.horizon_steps();

  std::set<std::string> ids;
  for (const auto & a : sc.agents) {
    if (a.id.empty()) {
      throw ScenarioError(ScenarioErrorCode::kInvalidValue, "agent id must be nonempty");
    }
    if (!ids.insert(a.id).second) {
      throw ScenarioError(ScenarioErrorCode::kDuplicateId, "agent id '" + a.id + "' repeated");
    }
    if (!(a.length > 0.0) || !(a.width > 0.0) || !std::isfinite(a.length) ||
        !std::isfinite(a.width)) {
      throw ScenarioError(
        ScenarioErrorCode::kInvalidValue, "agent '" + a.id + "': dimensions must be positive");
    }
    if (a.observed.empty()) {
      throw ScenarioError(
        ScenarioErrorCode::kInvalidValue, "agent '" + a.id + "': observed history is empty");
    }
    if (static_cast<int>(a.reference_future.size()) != horizon) {
      throw ScenarioError(
        ScenarioErrorCode::kLengthMismatch,
        "agent '" + a.id + "': reference_future has " + std::to_string(a.reference_future.size()) +
          " states, horizon is " + std::to_string(horizon));
    }
    for (const auto & s : a.observed) {
      check_state(s, "agent '" + a.id + "' observed");
    }
    for (const auto & s : a.reference_future) {
      check_state(s, "agent '" + a.id + "' reference_future");
    }
  }
  if (ids.count(sc.ego_id) == 0) {
    throw ScenarioError(
      ScenarioErrorCode::kMissingEgo, "ego_id '" + sc.ego_id + "' is not among the agents");
  }
  for (const auto & line : sc.map) {
    for (const auto & p : line.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw ScenarioError(ScenarioErrorCode::kInvalidValue, "map point is not finite");
      }
    }
  }
}

Scenario load_scenario(std::string_view document)
{
  Scenario sc;
  try {
    sc = scenario_from_json(json::parse(document));
  } catch (const json::exception & e) {
    throw ScenarioError(ScenarioErrorCode::kSchema, e.what());
  }
  validate_scenario(sc);
  return sc;
}

Scenario load_scenario_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string save_scenario(const Scenario & sc)
{
  json doc;
  doc["id"] = sc.id;
  doc["config"] = {
    {"step_seconds", sc.config.step_seconds},
    {"observed_seconds", sc.config.observed_seconds},
    {"horizon_seconds", sc.config.horizon_seconds}};
  doc["ego_id"] = sc.ego_id;
  json map = json::array();
  for (const auto & line : sc.map) {
    json pts = json::array();
    for (const auto & p : line.points) {
      pts.push_back({p.x, p.y});
    }
    map.push_back({{"type", to_string(line.type)}, {"points", pts}});
  }
  doc["map"] = map;
  json agents = json::array();
  for (const auto & a : sc.agents) {
    json ja;
    ja["id"] = a.id;
    ja["kind"] = to_string(a.kind);
    ja["length"] = a.length;
    ja["width"] = a.width;
    ja["observed"] = json::array();
    for (const auto & s : a.observed) {
      ja["observed"].push_back(state_to_json(s));
    }
    ja["reference_future"] = json::array();
    for (const auto & s : a.reference_future) {
      ja["reference_future"].push_back(state_to_json(s));
    }
    agents.push_back(ja);
  }
  doc["agents"] = agents;
  return doc.dump(2) + "\n";
}

std::vector<PathPoint> reference_path_points(const AgentRecord & agent)
{
  std::vector<PathPoint> pts;
  pts.reserve(agent.reference_future.size() + 1);
  pts.push_back(agent.current().position());
  for (const auto & s : agent.reference_future) {
    pts.push_back(s.position());
  }
  return pts;
}

}  // namespace relsim
