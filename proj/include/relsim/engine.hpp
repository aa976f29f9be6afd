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

#ifndef RELSIM__ENGINE_HPP_
#define RELSIM__ENGINE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "relsim/geometry.hpp"
#include "relsim/planners.hpp"
#include "relsim/polyline.hpp"
#include "relsim/relation.hpp"
#include "relsim/scenario.hpp"
#include "relsim/trajectory.hpp"

namespace relsim
{

enum class Policy {
  kM0,    //!< detect and log conflicts, never modify trajectories
  kM1,    //!< send both agents to the cross point, no relation query
  kFull,  //!< only the reactor yields to the influencer
};

enum class EgoMode {
  kAuthoritative,  //!< the ego plan is never modified
  kCooperative,    //!< the ego yields when labeled reactor
};

const char * to_string(Policy policy);
const char * to_string(EgoMode mode);
/// Case-insensitive "m0" / "m1" / "full"; throws std::invalid_argument.
Policy parse_policy(std::string_view text);
EgoMode parse_ego_mode(std::string_view text);

struct ResolutionPolicy
{
  Policy policy = Policy::kFull;
  EgoMode ego_mode = EgoMode::kCooperative;

  /// "m0", "m1", "full:authoritative", "full:cooperative", ...
  std::string label() const;

  friend bool operator==(const ResolutionPolicy &, const ResolutionPolicy &) = default;
};

/// Parses a label produced by ResolutionPolicy::label(); the ego mode part
/// is optional and defaults to cooperative.
ResolutionPolicy parse_resolution_policy(std::string_view text);

struct ConflictRecord
{
  std::string agent_a;
  std::string agent_b;
  int first_collision_step = 0;
  PathPoint collision_point;  //!< midpoint of the two centers at the collision step
  std::optional<CrossPoint> cross;
};

struct Event
{
  int step = 0;
  std::string kind;
  nlohmann::json payload;
};

struct SimState
{
  int current_step = 0;
  std::map<std::string, Trajectory> committed;  //!< full episode span per agent
  std::set<std::string> relevant;               //!< env agents off their log replay
  std::vector<Event> events;
  std::optional<Trajectory> last_plan;
  std::vector<int> resolutions;  //!< conflicts handled by each resolve_all call
};

struct EngineOptions
{
  ResolutionPolicy policy;
  KinematicLimits limits;
  OverrideRegistry overrides;
  std::shared_ptr<const RelationPredictor> predictor;  //!< null: cross-point oracle
  double standoff_buffer = 2.0;         //!< clearance kept in front of a yielding agent [m]
  double plan_change_tolerance = 0.01;  //!< [m]
};

/// Thrown when resolve_all exceeds its resolution budget of 4 per agent.
class ResolutionBudgetError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

class Engine
{
public:
  /// Keeps a reference to `scenario`. Throws std::invalid_argument when an
  /// override names an unknown agent.
  Engine(const Scenario & scenario, EngineOptions options);

  /// Every agent committed to its log replay, at step 0.
  SimState initial_state() const;

  /// State of an agent at `state.current_step`.
  AgentState current_state(const SimState & state, const std::string & id) const;

  /// (ego, env) pairs whose boxes overlap from the current step on, sorted
  /// by collision step then env id. `plan` must start at the current step.
  std::vector<ConflictRecord> detect_conflicts(const Trajectory & plan, const SimState & state) const;

  /// Resolves one conflict under the configured policy; returns the ids of
  /// the agents whose committed trajectories changed.
  std::vector<std::string> resolve_conflict(const ConflictRecord & conflict, SimState & state) const;

  /// Commits `plan` for the ego and resolves conflicts until none remain
  /// among agents touched by the cascade (M0 only logs).
  void resolve_all(const Trajectory & plan, SimState & state) const;

  /// Runs resolve_all when `plan` differs from the previous plan (always on
  /// the first call), otherwise keeps the committed trajectories.
  void prepare(SimState & state, const Trajectory & plan) const;

  /// Moves to the next step.
  void advance(SimState & state) const;

  /// prepare followed by advance.
  void step(SimState & state, const Trajectory & plan) const;

  const Scenario & scenario() const { return *scenario_; }
  const EngineOptions & options() const { return options_; }
  int horizon_steps() const { return horizon_; }

private:
  std::optional<ConflictRecord> find_conflict(
    const std::string & id_a, const Trajectory & traj_a, const std::string & id_b,
    const Trajectory & traj_b, int from_step) const;
  Polyline path_for(const SimState & state, const std::string & id) const;
  double cruise_for(const SimState & state, const std::string & id) const;
  double standoff(const CrossPoint & cross, const BoxDims & reactor, const BoxDims & other) const;
  void commit(
    SimState & state, const std::string & id, const RolloutResult & rollout,
    const std::string & reason) const;
  void regenerate(
    SimState & state, const std::string & id, const PathPoint & goal, double goal_offset,
    const std::string & reason) const;
  void stop_now(SimState & state, const std::string & id) const;
  void update_relevant(SimState & state) const;

  const Scenario * scenario_;
  EngineOptions options_;
  std::shared_ptr<const RelationPredictor> predictor_;
  int horizon_;
};

/// Committed state of every agent at one step, after that step's resolution.
struct StepSnapshot
{
  int step = 0;
  std::map<std::string, AgentState> current;
  std::map<std::string, Trajectory> future;  //!< committed steps [step, T)
};

struct EpisodeResult
{
  std::string scenario_id;
  std::string ego_id;
  std::string planner;
  ResolutionPolicy policy;
  std::uint64_t seed = 0;
  std::vector<StepSnapshot> steps;
  SimState final_state;
};

/// Planner failures are rethrown as std::runtime_error naming the step.
EpisodeResult run_episode(
  const Scenario & scenario, Planner & planner, const EngineOptions & options,
  std::uint64_t seed);

}  // namespace relsim

#endif  // RELSIM__ENGINE_HPP_
