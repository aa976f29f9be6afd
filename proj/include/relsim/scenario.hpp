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

#ifndef RELSIM__SCENARIO_HPP_
#define RELSIM__SCENARIO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relsim/types.hpp"

namespace relsim
{

struct SimConfig
{
  double step_seconds = 0.5;
  double observed_seconds = 1.0;
  double horizon_seconds = 8.0;

  /// horizon_seconds / step_seconds; valid only for a validated config.
  int horizon_steps() const;

  friend bool operator==(const SimConfig &, const SimConfig &) = default;
};

enum class AgentKind { kVehicle, kPedestrian, kCyclist };

const char * to_string(AgentKind kind);

struct AgentRecord
{
  std::string id;
  AgentKind kind = AgentKind::kVehicle;
  double length = 4.5;
  double width = 2.0;
  std::vector<AgentState> observed;          //!< history, last entry is "now"
  std::vector<AgentState> reference_future;  //!< logged future, steps [0, T)

  BoxDims dims() const { return {length, width}; }
  const AgentState & current() const { return observed.back(); }
  PathPoint goal() const { return reference_future.back().position(); }
  Trajectory reference_trajectory() const { return {0, reference_future}; }

  friend bool operator==(const AgentRecord &, const AgentRecord &) = default;
};

enum class MapFeatureType { kLaneCenterline, kRoadEdge, kCrosswalk };

const char * to_string(MapFeatureType type);

struct MapPolyline
{
  MapFeatureType type = MapFeatureType::kLaneCenterline;
  std::vector<PathPoint> points;

  friend bool operator==(const MapPolyline &, const MapPolyline &) = default;
};

struct Scenario
{
  std::string id;
  SimConfig config;
  std::string ego_id;
  std::vector<MapPolyline> map;
  std::vector<AgentRecord> agents;

  /// Throws std::out_of_range for unknown ids.
  const AgentRecord & agent(std::string_view id) const;
  const AgentRecord & ego() const { return agent(ego_id); }
  bool has_agent(std::string_view id) const;

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

enum class ScenarioErrorCode {
  kSchema,          //!< malformed JSON or a missing / mistyped field
  kInvalidValue,    //!< a field violates its value range
  kDuplicateId,
  kMissingEgo,
  kLengthMismatch,  //!< reference_future length != horizon steps
};

const char * to_string(ScenarioErrorCode code);

class ScenarioError : public std::runtime_error
{
public:
  ScenarioError(ScenarioErrorCode code, const std::string & what)
  : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
  {
  }

  ScenarioErrorCode code() const { return code_; }

private:
  ScenarioErrorCode code_;
};

/// Checks every scenario invariant; throws ScenarioError on the first
/// violation. Headings are not required to be normalized.
void validate_scenario(const Scenario & scenario);

/// Parses, normalizes headings into (-pi, pi] and validates.
Scenario load_scenario(std::string_view document);
Scenario load_scenario_file(const std::filesystem::path & path);

/// Serializes with a fixed key order; `load_scenario(save_scenario(s)) == s`
/// for any validated scenario with normalized headings.
std::string save_scenario(const Scenario & scenario);

/// Reference path of an agent: its current position followed by the logged
/// future positions.
std::vector<PathPoint> reference_path_points(const AgentRecord & agent);

}  // namespace relsim

#endif  // RELSIM__SCENARIO_HPP_
