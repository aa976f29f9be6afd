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

#include "relsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "relsim/geometry.hpp"

namespace relsim
{

namespace
{

using nlohmann::json;

json state_json(const AgentState & s) { return json::array({s.x, s.y, s.heading, s.speed}); }

json states_json(const std::vector<AgentState> & states)
{
  json out = json::array();
  for (const auto & s : states) {
    out.push_back(state_json(s));
  }
  return out;
}

AgentState parse_state(const json & j)
{
  if (!j.is_array() || j.size() != 4) {
    throw TraceError("state must be [x, y, heading, speed]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

constexpr double kCanvas = 800.0;
constexpr double kMargin = 10.0;

struct View
{
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  double scale = 1.0;
  double width = kCanvas;
  double height = kCanvas;

  void include(double x, double y)
  {
    min_x = std::min(min_x, x);
    min_y = std::min(min_y, y);
    max_x = std::max(max_x, x);
    max_y = std::max(max_y, y);
  }

  void finish()
  {
    if (!std::isfinite(min_x)) {
      min_x = min_y = -1.0;
      max_x = max_y = 1.0;
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
    scale = (kCanvas - 2.0 * kMargin) / span;
    width = (max_x - min_x) * scale + 2.0 * kMargin;
    height = (max_y - min_y) * scale + 2.0 * kMargin;
  }

  // SVG y grows downward.
  std::pair<double, double> map(double x, double y) const
  {
    return {(x - min_x) * scale + kMargin, (max_y - y) * scale + kMargin};
  }
};

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string & text)
{
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
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

const char * map_style(const std::string & type)
{
  if (type == "lane_centerline") {
    return R"(stroke="#b0b0b0" stroke-width="1" stroke-dasharray="6 4" fill="none")";
  }
  if (type == "crosswalk") {
    return R"(stroke="#d8c070" stroke-width="2" fill="none")";
  }
  return R"(stroke="#404040" stroke-width="1.5" fill="none")";
}

}  // namespace

json trace_json(const EpisodeResult & result, const Scenario & scenario)
{
  json doc;
  doc["scenario_id"] = result.scenario_id;
  doc["ego_id"] = result.ego_id;
  doc["planner"] = result.planner;
  doc["policy"] = result.policy.label();
  doc["seed"] = result.seed;
  doc["step_seconds"] = scenario.config.step_seconds;

  json agents = json::array();
  for (const auto & a : scenario.agents) {
    agents.push_back(
      {{"id", a.id}, {"kind", to_string(a.kind)}, {"length", a.length}, {"width", a.width}});
  }
  doc["agents"] = agents;

  json map = json::array();
  for (const auto & m : scenario.map) {
    json pts = json::array();
    for (const auto & p : m.points) {
      pts.push_back({p.x, p.y});
    }
    map.push_back({{"type", to_string(m.type)}, {"points", pts}});
  }
  doc["map"] = map;

  json steps = json::array();
  for (const auto & snap : result.steps) {
    json per_agent = json::object();
    for (const auto & [id, state] : snap.current) {
      per_agent[id] = {{"state", state_json(state)},
                       {"future", states_json(snap.future.at(id).states)}};
    }
    steps.push_back({{"step", snap.step}, {"agents", per_agent}});
  }
  doc["steps"] = steps;

  json trajectories = json::object();
  for (const auto & [id, traj] : result.final_state.committed) {
    trajectories[id] = states_json(traj.states);
  }
  doc["trajectories"] = trajectories;
  doc["relevant"] = result.final_state.relevant;

  json events = json::array();
  for (const auto & e : result.final_state.events) {
    events.push_back({{"step", e.step}, {"kind", e.kind}, {"payload", e.payload}});
  }
  doc["events"] = events;
  doc["resolutions"] = result.final_state.resolutions;
  return doc;
}

std::vector<std::string> render_frames(const json & trace)
{
  struct AgentInfo
  {
    BoxDims dims;
  };
  std::map<std::string, AgentInfo> agents;
  std::set<std::string> relevant;
  std::string ego;
  try {
    if (!trace.is_object() || !trace.at("steps").is_array()) {
      throw TraceError("trace must be an object with a steps array");
    }
    ego = trace.at("ego_id").get<std::string>();
    for (const auto & a : trace.at("agents")) {
      agents[a.at("id").get<std::string>()] = {
        {a.at("length").get<double>(), a.at("width").get<double>()}};
    }
    for (const auto & id : trace.at("relevant")) {
      relevant.insert(id.get<std::string>());
    }
  } catch (const json::exception & e) {
    throw TraceError(std::string("malformed trace: ") + e.what());
  }

  View view;
  const json empty_map = json::array();
  const json & map = trace.contains("map") ? trace.at("map") : empty_map;
  try {
    for (const auto & m : map) {
      for (const auto & p : m.at("points")) {
        view.include(p.at(0).get<double>(), p.at(1).get<double>());
      }
    }
    for (const auto & step : trace.at("steps")) {
      for (const auto & [id, entry] : step.at("agents").items()) {
        const AgentState s = parse_state(entry.at("state"));
        view.include(s.x, s.y);
        for (const auto & f : entry.at("future")) {
          const AgentState fs = parse_state(f);
          view.include(fs.x, fs.y);
        }
      }
    }
  } catch (const json::exception & e) {
    throw TraceError(std::string("malformed trace: ") + e.what());
  }
  view.finish();

  auto color_of = [&](const std::string & id) {
    if (id == ego) {
      return "#1f5fbf";
    }
    return relevant.count(id) != 0 ? "#e07000" : "#707070";
  };

  std::vector<std::string> frames;
  try {
    for (const auto & step : trace.at("steps")) {
      std::ostringstream svg;
      svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << num(view.width)
          << R"(" height=")" << num(view.height) << R"(" viewBox="0 0 )" << num(view.width) << ' '
          << num(view.height) << "\">\n";
      svg << R"(<rect width="100%" height="100%" fill="#ffffff"/>)" << '\n';
      for (const auto & m : map) {
        svg << "<polyline points=\"";
        for (const auto & p : m.at("points")) {
          const auto [x, y] = view.map(p.at(0).get<double>(), p.at(1).get<double>());
          svg << num(x) << ',' << num(y) << ' ';
        }
        svg << "\" " << map_style(m.at("type").get<std::string>()) << "/>\n";
      }
      for (const auto & [id, entry] : step.at("agents").items()) {
        const auto it = agents.find(id);
        if (it == agents.end()) {
          throw TraceError("step references unknown agent '" + id + "'");
        }
        const char * color = color_of(id);
        for (const auto & f : entry.at("future")) {
          const AgentState fs = parse_state(f);
          const auto [x, y] = view.map(fs.x, fs.y);
          svg << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << R"(" r="1.5" fill=")" << color
              << "\"/>\n";
        }
        const AgentState s = parse_state(entry.at("state"));
        svg << "<polygon class=\"" << (relevant.count(id) ? "agent relevant" : "agent")
            << "\" points=\"";
        for (const auto & corner : box_at(s, it->second.dims).corners()) {
          const auto [x, y] = view.map(corner.x, corner.y);
          svg << num(x) << ',' << num(y) << ' ';
        }
        svg << "\" fill=\"" << color << R"(" fill-opacity="0.6" stroke=")" << color << "\"";
        if (relevant.count(id) != 0) {
          svg << R"( stroke-width="2.5")";
        }
        svg << "/>\n";
        const auto [tx, ty] = view.map(s.x, s.y);
        svg << "<text x=\"" << num(tx) << "\" y=\"" << num(ty - 8.0)
            << R"(" font-size="10" text-anchor="middle" fill="#202020">)" << escape(id) << "</text>\n";
      }
      svg << "<text x=\"" << num(kMargin) << "\" y=\"" << num(kMargin + 10.0)
          << R"(" font-size="12" fill="#202020">step )" << step.at("step").get<int>() << "</text>\n";
      svg << "</svg>\n";
      frames.push_back(svg.str());
    }
  } catch (const json::exception & e) {
    throw TraceError(std::string("malformed trace: ") + e.what());
  }
  return frames;
}

}  // namespace relsim
