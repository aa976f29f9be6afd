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

#include "relsim/planners.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "relsim/polyline.hpp"
#include "relsim/rng.hpp"
#include "relsim/trajectory.hpp"

namespace relsim
{

namespace
{

constexpr double kFadeInSeconds = 1.0;

std::string lower(std::string_view s)
{
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

// Log state at fractional sample index u, where -1 is the current state.
AgentState log_state_at(const AgentRecord & ego, double u)
{
  const int last = static_cast<int>(ego.reference_future.size()) - 1;
  auto sample = [&](int i) -> const AgentState & {
    return i < 0 ? ego.current() : ego.reference_future[static_cast<std::size_t>(i)];
  };
  if (std::abs(u - last) < 1e-12) {
    return sample(last);
  }
  if (u > last) {
    AgentState held = sample(last);
    held.speed = 0.0;
    return held;
  }
  const int i0 = static_cast<int>(std::floor(u));
  const double f = u - i0;
  const AgentState & a = sample(i0);
  if (f < 1e-12) {
    return a;
  }
  const AgentState & b = sample(i0 + 1);
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  AgentState s;
  s.x = a.x + f * dx;
  s.y = a.y + f * dy;
  s.heading = std::hypot(dx, dy) > 1e-9 ? std::atan2(dy, dx) : a.heading;
  s.speed = a.speed + f * (b.speed - a.speed);
  return s;
}

Trajectory full_perturbed_plan(const Scenario & scenario, const PerturbParams & params)
{
  const AgentRecord & ego = scenario.ego();
  const double dt = scenario.config.step_seconds;
  const int horizon = static_cast<int>(ego.reference_future.size());
  const double duration = horizon * dt;

  Rng rng(params.seed);
  std::array<double, 3> amp{};
  std::array<double, 3> phase{};
  for (std::size_t j = 0; j < amp.size(); ++j) {
    amp[j] = rng.normal();
    phase[j] = rng.uniform(0.0, 2.0 * kPi);
  }
  const double sigma = params.lateral_sigma;
  auto lateral = [&](double t) {
    if (sigma <= 0.0) {
      return 0.0;
    }
    double n = 0.0;
    for (std::size_t j = 0; j < amp.size(); ++j) {
      n += amp[j] * std::sin(static_cast<double>(j + 1) * kPi * t / duration + phase[j]);
    }
    n *= sigma * std::sqrt(2.0 / 3.0);
    n = std::clamp(n, -2.0 * sigma, 2.0 * sigma);
    return n * std::min(1.0, t / kFadeInSeconds);
  };

  Trajectory out;
  out.states.reserve(static_cast<std::size_t>(horizon));
  for (int k = 0; k < horizon; ++k) {
    const double t = (k + 1) * dt;
    AgentState s = log_state_at(ego, params.speed_scale * (k + 1) - 1.0);
    s.speed *= params.speed_scale;
    const double d = lateral(t);
    if (d != 0.0) {
      s.x -= d * std::sin(s.heading);
      s.y += d * std::cos(s.heading);
    }
    out.states.push_back(s);
  }
  return out;
}

Trajectory full_slowdown_plan(const Scenario & scenario, double decel)
{
  if (!(decel > 0.0)) {
    throw std::invalid_argument("slowdown deceleration must be positive");
  }
  const AgentRecord & ego = scenario.ego();
  const double dt = scenario.config.step_seconds;
  const Polyline path(reference_path_points(ego), ego.current().heading);
  const bool degenerate = path.length() <= 0.0;
  const double v0 = std::max(0.0, ego.current().speed);

  Trajectory out;
  double s = 0.0;
  double v_prev = v0;
  for (std::size_t k = 0; k < ego.reference_future.size(); ++k) {
    const double t = static_cast<double>(k + 1) * dt;
    const double v = std::min(std::max(0.0, v0 - decel * t), ego.reference_future[k].speed);
    s += 0.5 * (v_prev + v) * dt;
    v_prev = v;
    const PathPoint p = path.point_at(s);
    const double heading = degenerate ? ego.current().heading : path.heading_at(s);
    out.states.push_back({p.x, p.y, normalize_angle(heading), std::max(0.0, v)});
  }
  return out;
}

class ReplayPlanner : public Planner
{
public:
  std::string name() const override { return "replay"; }
  void reset(const Scenario &, std::uint64_t) override {}
  Trajectory plan(const Scenario & scenario, int step) override { return replay_plan(scenario, step); }
};

class PerturbedPlanner : public Planner
{
public:
  explicit PerturbedPlanner(PlannerSpec spec) : spec_(std::move(spec)) {}

  std::string name() const override { return "perturbed"; }

  void reset(const Scenario & scenario, std::uint64_t seed) override
  {
    PerturbParams params;
    params.seed = seed;
    params.lateral_sigma = spec_.lateral_sigma;
    if (spec_.speed_scale) {
      params.speed_scale = *spec_.speed_scale;
    } else {
      // Separate stream so the scale does not shift the lateral noise.
      Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
      params.speed_scale = rng.uniform(0.85, 1.15);
    }
    full_ = full_perturbed_plan(scenario, params);
  }

  Trajectory plan(const Scenario &, int step) override { return full_.tail(step); }

private:
  PlannerSpec spec_;
  Trajectory full_;
};

class SlowdownPlanner : public Planner
{
public:
  explicit SlowdownPlanner(double decel) : decel_(decel) {}

  std::string name() const override { return "slowdown"; }

  void reset(const Scenario & scenario, std::uint64_t) override
  {
    full_ = full_slowdown_plan(scenario, decel_);
  }

  Trajectory plan(const Scenario &, int step) override { return full_.tail(step); }

private:
  double decel_;
  Trajectory full_;
};

}  // namespace

const char * to_string(PlannerKind kind)
{
  switch (kind) {
    case PlannerKind::kReplay:
      return "replay";
    case PlannerKind::kPerturbed:
      return "perturbed";
    case PlannerKind::kSlowdown:
      return "slowdown";
  }
  return "unknown";
}

PlannerKind parse_planner_kind(std::string_view text)
{
  const std::string t = lower(text);
  if (t == "replay") {
    return PlannerKind::kReplay;
  }
  if (t == "perturbed") {
    return PlannerKind::kPerturbed;
  }
  if (t == "slowdown") {
    return PlannerKind::kSlowdown;
  }
  throw std::invalid_argument("unknown planner '" + std::string(text) + "'");
}

void PlannerSpec::validate() const
{
  if (speed_scale && !(*speed_scale >= 0.7 && *speed_scale <= 1.3)) {
    throw std::invalid_argument("speed_scale must lie in [0.7, 1.3]");
  }
  if (!(lateral_sigma >= 0.0) || !std::isfinite(lateral_sigma)) {
    throw std::invalid_argument("lateral_sigma must be a nonnegative number");
  }
  if (!(decel > 0.0) || !std::isfinite(decel)) {
    throw std::invalid_argument("decel must be positive");
  }
}

Trajectory replay_plan(const Scenario & scenario, int step)
{
  return replay_rollout(scenario.ego(), step);
}

Trajectory perturbed_plan(const Scenario & scenario, int step, const PerturbParams & params)
{
  if (!(params.speed_scale > 0.0)) {
    throw std::invalid_argument("speed_scale must be positive");
  }
  return full_perturbed_plan(scenario, params).tail(step);
}

Trajectory slowdown_plan(const Scenario & scenario, int step, double decel)
{
  return full_slowdown_plan(scenario, decel).tail(step);
}

std::unique_ptr<Planner> make_planner(const PlannerSpec & spec)
{
  spec.validate();
  switch (spec.kind) {
    case PlannerKind::kReplay:
      return std::make_unique<ReplayPlanner>();
    case PlannerKind::kPerturbed:
      return std::make_unique<PerturbedPlanner>(spec);
    case PlannerKind::kSlowdown:
      return std::make_unique<SlowdownPlanner>(spec.decel);
  }
  throw std::invalid_argument("unknown planner kind");
}

}  // namespace relsim
