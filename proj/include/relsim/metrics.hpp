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

#ifndef RELSIM__METRICS_HPP_
#define RELSIM__METRICS_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "relsim/engine.hpp"
#include "relsim/scenario.hpp"

namespace relsim
{

enum class CollisionClass { kFront, kSide, kRear };

const char * to_string(CollisionClass cls);

struct CollisionRecord
{
  std::string striker;
  std::string struck;
  int step = 0;          //!< first collision step of the pair
  PathPoint contact;     //!< centroid of the overlap region
  double angle = 0.0;    //!< heading difference striker vs struck [rad]
  CollisionClass cls = CollisionClass::kSide;

  friend bool operator==(const CollisionRecord &, const CollisionRecord &) = default;
};

/// Striker, contact point and class for two overlapping boxes.
CollisionRecord classify_contact(
  const std::string & id_a, const AgentState & a, const BoxDims & dims_a,
  const std::string & id_b, const AgentState & b, const BoxDims & dims_b);

/// One record per colliding pair (pairs in id order), classified at the
/// pair's first collision step. Trajectories must share one step range.
std::vector<CollisionRecord> classify_collisions(
  const std::map<std::string, Trajectory> & trajectories, const Scenario & scenario);

struct EpisodeMetrics
{
  double relevant_ratio = 0.0;
  double ade = 0.0;           //!< over all env agents [m]
  double fde = 0.0;           //!< [m]
  double relevant_ade = 0.0;  //!< over relevant agents only [m]
  double relevant_fde = 0.0;  //!< [m]
  double front_rate = 0.0;
  double side_rate = 0.0;
  double rear_rate = 0.0;
  double progress = 0.0;      //!< mean traveled distance per agent [m]
  int residual_collision_pairs = 0;
};

/// |relevant| / number of env agents; 0 without env agents.
double relevant_ratio(const EpisodeResult & result, const Scenario & scenario);

/// (ADE, FDE) of the simulated env trajectories against the log, averaged
/// over env agents (or over relevant agents only). 0 when there are none.
std::pair<double, double> displacement_errors(
  const EpisodeResult & result, const Scenario & scenario, bool relevant_only = false);

/// Mean over all agents of the summed per-step displacement, starting from
/// each agent's state at the start of the episode.
double progress(const EpisodeResult & result, const Scenario & scenario);

EpisodeMetrics compute_metrics(const EpisodeResult & result, const Scenario & scenario);

nlohmann::json metrics_json(const EpisodeMetrics & metrics);

struct BatchRow
{
  std::string label;
  int episodes = 0;
  EpisodeMetrics mean;
};

/// Per-metric means; throws std::invalid_argument for an empty list.
BatchRow aggregate(const std::vector<EpisodeMetrics> & episodes, const std::string & label);

/// Report columns, in order, after the label and episode count.
const std::vector<std::string> & report_columns();

std::string report_csv(const std::vector<BatchRow> & rows);
std::string report_json(const std::vector<BatchRow> & rows);

}  // namespace relsim

#endif  // RELSIM__METRICS_HPP_
