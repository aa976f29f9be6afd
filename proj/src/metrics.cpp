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

#include "relsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "relsim/geometry.hpp"

namespace relsim
{

namespace
{

constexpr double kRearBand = kPi / 4.0;
constexpr double kFrontBand = 3.0 * kPi / 4.0;

const std::map<std::string, Trajectory> & simulated(const EpisodeResult & result)
{
  return result.final_state.committed;
}

std::string fixed(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<double> row_values(const EpisodeMetrics & m)
{
  return {m.relevant_ratio, m.ade, m.fde, m.front_rate, m.side_rate, m.rear_rate, m.progress};
}

}  // namespace

const char * to_string(CollisionClass cls)
{
  switch (cls) {
    case CollisionClass::kFront:
      return "front";
    case CollisionClass::kSide:
      return "side";
    case CollisionClass::kRear:
      return "rear";
  }
  return "unknown";
}

CollisionRecord classify_contact(
  const std::string & id_a, const AgentState & a, const BoxDims & dims_a,
  const std::string & id_b, const AgentState & b, const BoxDims & dims_b)
{
  const OrientedBox box_a = box_at(a, dims_a);
  const OrientedBox box_b = box_at(b, dims_b);
  CollisionRecord rec;
  const auto poly = overlap_polygon(box_a, box_b);
  if (poly.empty()) {
    rec.contact = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  } else {
    for (const auto & p : poly) {
      rec.contact.x += p.x;
      rec.contact.y += p.y;
    }
    rec.contact.x /= static_cast<double>(poly.size());
    rec.contact.y /= static_cast<double>(poly.size());
  }
  // Along-track position of the contact, +1 at the front face, -1 at the rear.
  auto along = [&](const AgentState & s, const BoxDims & d) {
    const double dx = rec.contact.x - s.x;
    const double dy = rec.contact.y - s.y;
    return (dx * std::cos(s.heading) + dy * std::sin(s.heading)) / (0.5 * d.length);
  };
  const bool a_strikes = along(a, dims_a) >= along(b, dims_b);
  rec.striker = a_strikes ? id_a : id_b;
  rec.struck = a_strikes ? id_b : id_a;
  rec.angle = heading_difference(a.heading, b.heading);
  if (rec.angle < kRearBand) {
    rec.cls = CollisionClass::kRear;
  } else if (rec.angle > kFrontBand) {
    rec.cls = CollisionClass::kFront;
  } else {
    rec.cls = CollisionClass::kSide;
  }
  return rec;
}

std::vector<CollisionRecord> classify_collisions(
  const std::map<std::string, Trajectory> & trajectories, const Scenario & scenario)
{
  std::vector<CollisionRecord> out;
  for (auto i = trajectories.begin(); i != trajectories.end(); ++i) {
    for (auto j = std::next(i); j != trajectories.end(); ++j) {
      const BoxDims dims_a = scenario.agent(i->first).dims();
      const BoxDims dims_b = scenario.agent(j->first).dims();
      const auto step =
        first_collision_step(i->second, j->second, dims_a, dims_b, i->second.start_step);
      if (!step) {
        continue;
      }
      CollisionRecord rec = classify_contact(
        i->first, i->second.at(*step), dims_a, j->first, j->second.at(*step), dims_b);
      rec.step = *step;
      out.push_back(rec);
    }
  }
  return out;
}

double relevant_ratio(const EpisodeResult & result, const Scenario & scenario)
{
  const std::size_t env = scenario.agents.size() - 1;
  if (env == 0) {
    return 0.0;
  }
  return static_cast<double>(result.final_state.relevant.size()) / static_cast<double>(env);
}

std::pair<double, double> displacement_errors(
  const EpisodeResult & result, const Scenario & scenario, bool relevant_only)
{
  double ade_sum = 0.0;
  double fde_sum = 0.0;
  int count = 0;
  for (const auto & agent : scenario.agents) {
    if (agent.id == scenario.ego_id) {
      continue;
    }
    if (relevant_only && result.final_state.relevant.count(agent.id) == 0) {
      continue;
    }
    const auto & sim = simulated(result).at(agent.id).states;
    const auto & ref = agent.reference_future;
    double total = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      total += distance(sim[k].position(), ref[k].position());
    }
    ade_sum += total / static_cast<double>(ref.size());
    fde_sum += distance(sim.back().position(), ref.back().position());
    ++count;
  }
  if (count == 0) {
    return {0.0, 0.0};
  }
  return {ade_sum / count, fde_sum / count};
}

double progress(const EpisodeResult & result, const Scenario & scenario)
{
  double total = 0.0;
  for (const auto & agent : scenario.agents) {
    PathPoint prev = agent.current().position();
    for (const auto & s : simulated(result).at(agent.id).states) {
      total += distance(prev, s.position());
      prev = s.position();
    }
  }
  return total / static_cast<double>(scenario.agents.size());
}

EpisodeMetrics compute_metrics(const EpisodeResult & result, const Scenario & scenario)
{
  EpisodeMetrics m;
  m.relevant_ratio = relevant_ratio(result, scenario);
  std::tie(m.ade, m.fde) = displacement_errors(result, scenario);
  std::tie(m.relevant_ade, m.relevant_fde) = displacement_errors(result, scenario, true);
  const auto collisions = classify_collisions(simulated(result), scenario);
  std::map<CollisionClass, int> counts;
  for (const auto & c : collisions) {
    ++counts[c.cls];
  }
  const double n = static_cast<double>(scenario.agents.size());
  m.front_rate = counts[CollisionClass::kFront] / n;
  m.side_rate = counts[CollisionClass::kSide] / n;
  m.rear_rate = counts[CollisionClass::kRear] / n;
  m.progress = progress(result, scenario);
  m.residual_collision_pairs = static_cast<int>(collisions.size());
  return m;
}

nlohmann::json metrics_json(const EpisodeMetrics & m)
{
  return {
    {"relevant_ratio", m.relevant_ratio},
    {"ade", m.ade},
    {"fde", m.fde},
    {"relevant_ade", m.relevant_ade},
    {"relevant_fde", m.relevant_fde},
    {"front", m.front_rate},
    {"side", m.side_rate},
    {"rear", m.rear_rate},
    {"progress", m.progress},
    {"residual_collision_pairs", m.residual_collision_pairs},
  };
}

BatchRow aggregate(const std::vector<EpisodeMetrics> & episodes, const std::string & label)
{
  if (episodes.empty()) {
    throw std::invalid_argument("cannot aggregate an empty episode list");
  }
  BatchRow row;
  row.label = label;
  row.episodes = static_cast<int>(episodes.size());
  EpisodeMetrics & s = row.mean;
  for (const auto & e : episodes) {
    s.relevant_ratio += e.relevant_ratio;
    s.ade += e.ade;
    s.fde += e.fde;
    s.relevant_ade += e.relevant_ade;
    s.relevant_fde += e.relevant_fde;
    s.front_rate += e.front_rate;
    s.side_rate += e.side_rate;
    s.rear_rate += e.rear_rate;
    s.progress += e.progress;
    s.residual_collision_pairs += e.residual_collision_pairs;
  }
  const double n = static_cast<double>(episodes.size());
  for (double * v : {&s.relevant_ratio, &s.ade, &s.fde, &s.relevant_ade, &s.relevant_fde,
                     &s.front_rate, &s.side_rate, &s.rear_rate, &s.progress}) {
    *v /= n;
  }
  return row;
}

const std::vector<std::string> & report_columns()
{
  static const std::vector<std::string> columns{
    "relevant_ratio", "ade", "fde", "front", "side", "rear", "progress"};
  return columns;
}

std::string report_csv(const std::vector<BatchRow> & rows)
{
  std::ostringstream out;
  out << "policy,episodes";
  for (const auto & c : report_columns()) {
    out << ',' << c;
  }
  out << '\n';
  for (const auto & row : rows) {
    out << row.label << ',' << row.episodes;
    for (double v : row_values(row.mean)) {
      out << ',' << fixed(v);
    }
    out << '\n';
  }
  return out.str();
}

std::string report_json(const std::vector<BatchRow> & rows)
{
  // Values go through the same fixed formatting as the CSV so both files
  // carry identical numbers.
  std::ostringstream out;
  out << "{\n  \"columns\": [";
  const auto & cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? ", " : "") << '"' << cols[i] << '"';
  }
  out << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto values = row_values(rows[r].mean);
    out << (r ? "," : "") << "\n    {\"policy\": " << nlohmann::json(rows[r].label).dump()
        << ", \"episodes\": " << rows[r].episodes;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      out << ", \"" << cols[i] << "\": " << fixed(values[i]);
    }
    out << '}';
  }
  out << (rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return out.str();
}

}  // namespace relsim
