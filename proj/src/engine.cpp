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

#include "relsim/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <tuple>
#include <utility>

namespace relsim
{

namespace
{

using PairKey = std::pair<std::string, std::string>;

PairKey pair_key(const std::string & a, const std::string & b)
{
  return a < b ? PairKey{a, b} : PairKey{b, a};
}

std::string lower(std::string_view s)
{
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

nlohmann::json point_json(const PathPoint & p) { return nlohmann::json::array({p.x, p.y}); }

nlohmann::json conflict_json(const ConflictRecord & c)
{
  nlohmann::json j;
  j["agents"] = {c.agent_a, c.agent_b};
  j["collision_step"] = c.first_collision_step;
  j["point"] = point_json(c.collision_point);
  if (c.cross) {
    j["cross"] = {
      {"kind", to_string(c.cross->kind)},
      {"point", point_json(c.cross->point)},
      {"arrival", {c.cross->index_a, c.cross->index_b}},
      {"reaches", {c.cross->reaches_a, c.cross->reaches_b}},
      {"angle", c.cross->angle},
    };
  }
  return j;
}

// (0, step) for agents that reach the point, (1, 0) otherwise.
std::pair<int, int> arrival_key(bool reaches, int index)
{
  return {reaches ? 0 : 1, reaches ? index : 0};
}

bool same_state(const AgentState & a, const AgentState & b)
{
  constexpr double kTol = 1e-9;
  return std::abs(a.x - b.x) <= kTol && std::abs(a.y - b.y) <= kTol &&
         std::abs(a.speed - b.speed) <= kTol && heading_difference(a.heading, b.heading) <= kTol;
}

}  // namespace

const char * to_string(Policy policy)
{
  switch (policy) {
    case Policy::kM0:
      return "m0";
    case Policy::kM1:
      return "m1";
    case Policy::kFull:
      return "full";
  }
  return "unknown";
}

const char * to_string(EgoMode mode)
{
  return mode == EgoMode::kAuthoritative ? "authoritative" : "cooperative";
}

Policy parse_policy(std::string_view text)
{
  const std::string t = lower(text);
  if (t == "m0") {
    return Policy::kM0;
  }
  if (t == "m1") {
    return Policy::kM1;
  }
  if (t == "full") {
    return Policy::kFull;
  }
  throw std::invalid_argument("unknown policy '" + std::string(text) + "' (m0, m1, full)");
}

EgoMode parse_ego_mode(std::string_view text)
{
  const std::string t = lower(text);
  if (t == "authoritative") {
    return EgoMode::kAuthoritative;
  }
  if (t == "cooperative") {
    return EgoMode::kCooperative;
  }
  throw std::invalid_argument(
    "unknown ego mode '" + std::string(text) + "' (authoritative, cooperative)");
}

std::string ResolutionPolicy::label() const
{
  if (policy == Policy::kFull) {
    return std::string(to_string(policy)) + ":" + to_string(ego_mode);
  }
  return to_string(policy);
}

ResolutionPolicy parse_resolution_policy(std::string_view text)
{
  ResolutionPolicy out;
  const auto colon = text.find(':');
  out.policy = parse_policy(text.substr(0, colon));
  if (colon != std::string_view::npos) {
    out.ego_mode = parse_ego_mode(text.substr(colon + 1));
  }
  return out;
}

Engine::Engine(const Scenario & scenario, EngineOptions options)
: scenario_(&scenario),
  options_(std::move(options)),
  horizon_(scenario.config.horizon_steps())
{
  options_.limits.validate();
  for (const auto & label : options_.overrides.labels()) {
    for (const auto & id : {label.influencer, label.reactor}) {
      if (!scenario.has_agent(id)) {
        throw std::invalid_argument("relation override names unknown agent '" + id + "'");
      }
    }
  }
  predictor_ = std::make_shared<OverridePredictor>(options_.overrides, options_.predictor);
}

SimState Engine::initial_state() const
{
  SimState state;
  for (const auto & agent : scenario_->agents) {
    state.committed.emplace(agent.id, replay_rollout(agent, 0));
  }
  return state;
}

AgentState Engine::current_state(const SimState & state, const std::string & id) const
{
  if (state.current_step == 0) {
    return scenario_->agent(id).current();
  }
  return state.committed.at(id).at(state.current_step - 1);
}

std::optional<ConflictRecord> Engine::find_conflict(
  const std::string & id_a, const Trajectory & traj_a, const std::string & id_b,
  const Trajectory & traj_b, int from_step) const
{
  const BoxDims dims_a = scenario_->agent(id_a).dims();
  const BoxDims dims_b = scenario_->agent(id_b).dims();
  const Trajectory a = traj_a.tail(from_step);
  const Trajectory b = traj_b.tail(from_step);
  const auto step = first_collision_step(a, b, dims_a, dims_b, from_step);
  if (!step) {
    return std::nullopt;
  }
  ConflictRecord rec;
  rec.agent_a = id_a;
  rec.agent_b = id_b;
  rec.first_collision_step = *step;
  const AgentState & sa = a.at(*step);
  const AgentState & sb = b.at(*step);
  rec.collision_point = {0.5 * (sa.x + sb.x), 0.5 * (sa.y + sb.y)};
  rec.cross = cross_point(a, b, dims_a, dims_b);
  return rec;
}

std::vector<ConflictRecord> Engine::detect_conflicts(
  const Trajectory & plan, const SimState & state) const
{
  const int c = state.current_step;
  if (plan.start_step != c || plan.end_step() < horizon_) {
    throw std::invalid_argument("plan must cover the remaining episode from the current step");
  }
  Trajectory ego_plan = plan;
  ego_plan.states.resize(static_cast<std::size_t>(horizon_ - c));
  // Pad to the committed layout so the tails line up.
  Trajectory full = state.committed.at(scenario_->ego_id);
  std::copy(ego_plan.states.begin(), ego_plan.states.end(), full.states.begin() + c);

  std::vector<ConflictRecord> out;
  for (const auto & [id, traj] : state.committed) {
    if (id == scenario_->ego_id) {
      continue;
    }
    if (auto rec = find_conflict(scenario_->ego_id, full, id, traj, c)) {
      out.push_back(std::move(*rec));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto & x, const auto & y) {
    return std::tie(x.first_collision_step, x.agent_b) < std::tie(y.first_collision_step, y.agent_b);
  });
  return out;
}

Polyline Engine::path_for(const SimState & state, const std::string & id) const
{
  const AgentRecord & agent = scenario_->agent(id);
  if (id == scenario_->ego_id && state.last_plan) {
    std::vector<PathPoint> pts{current_state(state, id).position()};
    for (const auto & s : state.last_plan->states) {
      pts.push_back(s.position());
    }
    return Polyline(std::move(pts), current_state(state, id).heading);
  }
  return Polyline(reference_path_points(agent), agent.current().heading);
}

double Engine::cruise_for(const SimState & state, const std::string & id) const
{
  const std::vector<AgentState> & source = id == scenario_->ego_id && state.last_plan
                                             ? state.last_plan->states
                                             : scenario_->agent(id).reference_future;
  double vmax = 0.0;
  for (const auto & s : source) {
    vmax = std::max(vmax, s.speed);
  }
  return std::min(current_state(state, id).speed, vmax);
}

double Engine::standoff(const CrossPoint & cross, const BoxDims & reactor, const BoxDims & other) const
{
  const double buffer = options_.standoff_buffer;
  if (cross.kind == CrossKind::kSameLaneCollision) {
    return 0.5 * (reactor.length + other.length) + buffer;
  }
  // Keep the reactor's front corners out of the other agent's lane band.
  const double sin_a = std::max(std::abs(std::sin(cross.angle)), 0.5);
  const double cot_a = std::abs(std::cos(cross.angle)) / sin_a;
  return 0.5 * reactor.length + 0.5 * reactor.width * cot_a + 0.5 * other.width / sin_a + buffer;
}

void Engine::commit(
  SimState & state, const std::string & id, const RolloutResult & rollout,
  const std::string & reason) const
{
  Trajectory & target = state.committed.at(id);
  const int c = state.current_step;
  std::copy(rollout.trajectory.states.begin(), rollout.trajectory.states.end(),
            target.states.begin() + c);
  state.events.push_back({c, "rollout",
                          {{"agent", id},
                           {"reason", reason},
                           {"regime", to_string(rollout.regime)},
                           {"goal_distance", rollout.goal_distance}}});
  if (rollout.overshoot > 1e-9) {
    state.events.push_back({c, "overshoot", {{"agent", id}, {"overshoot", rollout.overshoot}}});
  }
}

void Engine::regenerate(
  SimState & state, const std::string & id, const PathPoint & goal, double goal_offset,
  const std::string & reason) const
{
  RolloutOptions opts;
  opts.step_seconds = scenario_->config.step_seconds;
  opts.start_step = state.current_step;
  opts.cruise_speed = cruise_for(state, id);
  opts.goal_offset = goal_offset;
  const auto rollout = goal_conditioned_rollout(
    current_state(state, id), path_for(state, id), goal, horizon_ - state.current_step,
    options_.limits, opts);
  commit(state, id, rollout, reason);
}

void Engine::stop_now(SimState & state, const std::string & id) const
{
  RolloutOptions opts;
  opts.step_seconds = scenario_->config.step_seconds;
  opts.start_step = state.current_step;
  const auto rollout = immediate_stop_rollout(
    current_state(state, id), path_for(state, id), horizon_ - state.current_step, options_.limits,
    opts);
  commit(state, id, rollout, "escalation");
}

std::vector<std::string> Engine::resolve_conflict(
  const ConflictRecord & conflict, SimState & state) const
{
  const int c = state.current_step;
  state.events.push_back({c, "conflict", conflict_json(conflict)});
  if (options_.policy.policy == Policy::kM0) {
    return {};
  }
  if (!conflict.cross) {
    throw NotInConflictError(
      "conflict between " + conflict.agent_a + " and " + conflict.agent_b + " has no cross point");
  }
  const CrossPoint & cross = *conflict.cross;
  const std::string & a = conflict.agent_a;
  const std::string & b = conflict.agent_b;
  const BoxDims dims_a = scenario_->agent(a).dims();
  const BoxDims dims_b = scenario_->agent(b).dims();

  if (options_.policy.policy == Policy::kM1) {
    const auto arr_a = arrival_key(cross.reaches_a, cross.index_a);
    const auto arr_b = arrival_key(cross.reaches_b, cross.index_b);
    // The earlier agent stops on the point itself, the later one short of it.
    const double off_a = arr_a < arr_b ? 0.0 : standoff(cross, dims_a, dims_b);
    const double off_b = arr_b < arr_a ? 0.0 : standoff(cross, dims_b, dims_a);
    regenerate(state, a, cross.point, off_a, "cross_point");
    regenerate(state, b, cross.point, off_b, "cross_point");
    return {a, b};
  }

  const Trajectory traj_a = state.committed.at(a).tail(c);
  const Trajectory traj_b = state.committed.at(b).tail(c);
  RelationQuery query{a, b, &traj_a, &traj_b, dims_a, dims_b, scenario_->ego_id};
  const RelationLabel label = predictor_->predict(query);
  state.events.push_back({c, "relation",
                          {{"influencer", label.influencer},
                           {"reactor", label.reactor},
                           {"source", to_string(label.source)}}});
  std::string reactor = label.reactor;
  std::string influencer = label.influencer;
  if (reactor == scenario_->ego_id && options_.policy.ego_mode == EgoMode::kAuthoritative) {
    std::swap(reactor, influencer);
    state.events.push_back(
      {c, "forced_relation", {{"influencer", influencer}, {"reactor", reactor}}});
  }
  const BoxDims dims_r = reactor == a ? dims_a : dims_b;
  const BoxDims dims_i = reactor == a ? dims_b : dims_a;
  regenerate(state, reactor, cross.point, standoff(cross, dims_r, dims_i), "yield");
  return {reactor};
}

void Engine::resolve_all(const Trajectory & plan, SimState & state) const
{
  const int c = state.current_step;
  if (plan.start_step != c || plan.end_step() < horizon_) {
    throw std::invalid_argument("plan must cover the remaining episode from the current step");
  }
  Trajectory accepted = plan;
  accepted.states.resize(static_cast<std::size_t>(horizon_ - c));
  Trajectory & ego = state.committed.at(scenario_->ego_id);
  std::copy(accepted.states.begin(), accepted.states.end(), ego.states.begin() + c);
  state.last_plan = std::move(accepted);

  if (options_.policy.policy == Policy::kM0) {
    for (const auto & conflict : detect_conflicts(*state.last_plan, state)) {
      resolve_conflict(conflict, state);
    }
    state.resolutions.push_back(0);
    update_relevant(state);
    return;
  }

  const int budget = 4 * static_cast<int>(scenario_->agents.size());
  std::set<std::string> touched{scenario_->ego_id};
  std::map<PairKey, int> attempts;
  std::map<PairKey, std::vector<std::string>> last_modified;
  std::set<PairKey> given_up;
  int resolutions = 0;

  while (true) {
    std::optional<ConflictRecord> next;
    PairKey next_key;
    std::set<PairKey> scanned;
    for (const auto & t : touched) {
      for (const auto & [id, traj] : state.committed) {
        const PairKey key = pair_key(t, id);
        if (id == t || given_up.count(key) != 0 || !scanned.insert(key).second) {
          continue;
        }
        auto rec = find_conflict(t, state.committed.at(t), id, traj, c);
        if (!rec) {
          continue;
        }
        if (!next || std::tie(rec->first_collision_step, key) <
                       std::tie(next->first_collision_step, next_key)) {
          next = std::move(rec);
          next_key = key;
        }
      }
    }
    if (!next) {
      break;
    }

    const PairKey key = next_key;
    const int attempt = ++attempts[key];
    std::vector<std::string> modified;
    if (attempt <= 2) {
      modified = resolve_conflict(*next, state);
      last_modified[key] = modified;
    } else if (attempt == 3) {
      state.events.push_back({c, "conflict", conflict_json(*next)});
      modified = last_modified[key];
      for (const auto & id : modified) {
        state.events.push_back({c, "escalation", {{"agent", id}, {"agents", {key.first, key.second}}}});
        stop_now(state, id);
      }
    } else {
      given_up.insert(key);
      for (const auto & id : last_modified[key]) {
        const bool moving = current_state(state, id).speed > 0.0;
        state.events.push_back({c, moving ? "overshoot" : "unresolved",
                                {{"agent", id}, {"agents", {key.first, key.second}}}});
      }
      continue;
    }
    if (++resolutions > budget) {
      throw ResolutionBudgetError(
        "conflict resolution exceeded " + std::to_string(budget) + " resolutions at step " +
        std::to_string(c));
    }
    touched.insert(modified.begin(), modified.end());
  }
  state.resolutions.push_back(resolutions);
  update_relevant(state);
}

void Engine::update_relevant(SimState & state) const
{
  state.relevant.clear();
  for (const auto & agent : scenario_->agents) {
    if (agent.id == scenario_->ego_id) {
      continue;
    }
    const auto & committed = state.committed.at(agent.id).states;
    for (std::size_t k = 0; k < committed.size(); ++k) {
      if (!same_state(committed[k], agent.reference_future[k])) {
        state.relevant.insert(agent.id);
        break;
      }
    }
  }
}

void Engine::prepare(SimState & state, const Trajectory & plan) const
{
  const int c = state.current_step;
  if (c >= horizon_) {
    throw std::logic_error("episode already finished");
  }
  if (plan.start_step != c) {
    throw std::invalid_argument(
      "plan starts at step " + std::to_string(plan.start_step) + ", expected " + std::to_string(c));
  }
  if (plan.end_step() < horizon_) {
    throw std::invalid_argument("plan horizon shorter than the remaining episode");
  }
  bool changed = true;
  if (state.last_plan && state.last_plan->covers(c)) {
    Trajectory previous = state.last_plan->tail(c);
    Trajectory current = plan;
    current.states.resize(previous.states.size());
    changed = max_pointwise_distance(previous, current) > options_.plan_change_tolerance;
  }
  if (changed) {
    resolve_all(plan, state);
  }
}

void Engine::advance(SimState & state) const
{
  if (state.current_step >= horizon_) {
    throw std::logic_error("episode already finished");
  }
  ++state.current_step;
}

void Engine::step(SimState & state, const Trajectory & plan) const
{
  prepare(state, plan);
  advance(state);
}

EpisodeResult run_episode(
  const Scenario & scenario, Planner & planner, const EngineOptions & options, std::uint64_t seed)
{
  Engine engine(scenario, options);
  EpisodeResult result;
  result.scenario_id = scenario.id;
  result.ego_id = scenario.ego_id;
  result.planner = planner.name();
  result.policy = options.policy;
  result.seed = seed;

  try {
    planner.reset(scenario, seed);
  } catch (const std::exception & e) {
    throw std::runtime_error("planner " + planner.name() + " failed to initialize: " + e.what());
  }
  SimState state = engine.initial_state();
  for (int c = 0; c < engine.horizon_steps(); ++c) {
    Trajectory plan;
    try {
      plan = planner.plan(scenario, c);
    } catch (const std::exception & e) {
      throw std::runtime_error(
        "planner " + planner.name() + " failed at step " + std::to_string(c) + ": " + e.what());
    }
    engine.prepare(state, plan);
    StepSnapshot snap;
    snap.step = c;
    for (const auto & [id, traj] : state.committed) {
      snap.current.emplace(id, engine.current_state(state, id));
      snap.future.emplace(id, traj.tail(c));
    }
    result.steps.push_back(std::move(snap));
    engine.advance(state);
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace relsim
