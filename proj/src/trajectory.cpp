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

#include "relsim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace relsim
{

namespace
{
constexpr double kEps = 1e-9;
}  // namespace

void KinematicLimits::validate() const
{
  if (!(max_accel > 0.0) || !(comfort_decel > 0.0) || !(hard_decel > 0.0)) {
    throw std::invalid_argument("kinematic limits must be positive");
  }
  if (hard_decel < comfort_decel) {
    throw std::invalid_argument("hard_decel must be at least comfort_decel");
  }
}

const char * to_string(BrakeRegime regime)
{
  switch (regime) {
    case BrakeRegime::kNone:
      return "none";
    case BrakeRegime::kComfort:
      return "comfort";
    case BrakeRegime::kFirm:
      return "firm";
    case BrakeRegime::kHard:
      return "hard";
  }
  return "unknown";
}

SpeedProfile::SpeedProfile(double initial_speed, std::vector<Segment> segments)
: initial_speed_(initial_speed), segments_(std::move(segments))
{
}

double SpeedProfile::speed_at(double t) const
{
  // Braking segments are sized to end at zero; snap the rounding residue.
  auto settle = [](double v, double accel) {
    return accel < 0.0 && v < 1e-9 ? 0.0 : v;
  };
  double v = initial_speed_;
  for (const auto & seg : segments_) {
    if (t <= seg.duration) {
      return settle(v + seg.accel * t, seg.accel);
    }
    v = settle(v + seg.accel * seg.duration, seg.accel);
    t -= seg.duration;
  }
  return v;
}

double SpeedProfile::distance_at(double t) const
{
  double v = initial_speed_;
  double s = 0.0;
  for (const auto & seg : segments_) {
    const double tau = std::min(t, seg.duration);
    s += v * tau + 0.5 * seg.accel * tau * tau;
    if (t <= seg.duration) {
      return s;
    }
    v = std::max(0.0, v + seg.accel * seg.duration);
    t -= seg.duration;
  }
  return s + v * t;
}

StopPlan plan_stop(
  double v0, double cruise, double goal_distance, const KinematicLimits & limits)
{
  limits.validate();
  v0 = std::max(0.0, v0);
  cruise = std::max(0.0, cruise);
  const double d = std::max(0.0, goal_distance);
  const double a = limits.max_accel;
  const double b = limits.comfort_decel;
  const double h = limits.hard_decel;

  StopPlan plan;
  if (v0 <= kEps && (cruise <= kEps || d <= kEps)) {
    plan.profile = SpeedProfile(0.0);
    return plan;
  }

  const double comfort_stop = v0 * v0 / (2.0 * b);
  if (comfort_stop <= d + kEps) {
    std::vector<SpeedProfile::Segment> segs;
    if (v0 <= cruise) {
      const double full = (cruise * cruise - v0 * v0) / (2.0 * a) + cruise * cruise / (2.0 * b);
      if (full <= d) {
        segs.push_back({(cruise - v0) / a, a});
        segs.push_back({(d - full) / cruise, 0.0});
        segs.push_back({cruise / b, -b});
      } else {
        // Triangular profile: accelerate to the peak, then brake.
        const double peak =
          std::sqrt((d + v0 * v0 / (2.0 * a)) / (1.0 / (2.0 * a) + 1.0 / (2.0 * b)));
        segs.push_back({(peak - v0) / a, a});
        segs.push_back({peak / b, -b});
      }
      plan.stop_distance = d;
    } else {
      // Slow to cruise first; a zero cruise speed stops short of the goal.
      segs.push_back({(v0 - cruise) / b, -b});
      if (cruise > kEps) {
        segs.push_back({(d - comfort_stop) / cruise, 0.0});
        segs.push_back({cruise / b, -b});
        plan.stop_distance = d;
      } else {
        plan.stop_distance = comfort_stop;
      }
    }
    plan.profile = SpeedProfile(v0, std::move(segs));
    plan.regime = BrakeRegime::kComfort;
    return plan;
  }

  const double hard_stop = v0 * v0 / (2.0 * h);
  if (hard_stop <= d + kEps && d > kEps) {
    const double required = v0 * v0 / (2.0 * d);
    plan.profile = SpeedProfile(v0, {{v0 / required, -required}});
    plan.stop_distance = d;
    plan.regime = BrakeRegime::kFirm;
    return plan;
  }

  plan.profile = SpeedProfile(v0, {{v0 / h, -h}});
  plan.stop_distance = hard_stop;
  plan.overshoot = std::max(0.0, hard_stop - d);
  plan.regime = BrakeRegime::kHard;
  return plan;
}

namespace
{

Trajectory sample_along(
  const AgentState & current, const Polyline & path, double start_arc, const SpeedProfile & profile,
  int horizon_steps, const RolloutOptions & options)
{
  Trajectory out;
  out.start_step = options.start_step;
  out.states.reserve(static_cast<std::size_t>(horizon_steps));
  const bool degenerate = path.length() <= 0.0;
  for (int k = 1; k <= horizon_steps; ++k) {
    const double t = k * options.step_seconds;
    const double s = start_arc + profile.distance_at(t);
    const PathPoint p = path.point_at(s);
    const double heading = degenerate ? current.heading : path.heading_at(s);
    out.states.push_back({p.x, p.y, normalize_angle(heading), profile.speed_at(t)});
  }
  return out;
}

void check_horizon(int horizon_steps, const RolloutOptions & options)
{
  if (horizon_steps < 1) {
    throw std::invalid_argument("rollout horizon must be at least one step");
  }
  if (!(options.step_seconds > 0.0)) {
    throw std::invalid_argument("rollout step must be positive");
  }
}

}  // namespace

RolloutResult goal_conditioned_rollout(
  const AgentState & current, const Polyline & path, const PathPoint & goal, int horizon_steps,
  const KinematicLimits & limits, const RolloutOptions & options)
{
  check_horizon(horizon_steps, options);
  const double start_arc = path.project(current.position()).arc_length;
  const double goal_arc = path.project(goal, start_arc).arc_length - options.goal_offset;
  const double cruise = options.cruise_speed.value_or(current.speed);

  RolloutResult result;
  result.goal_distance = std::max(0.0, goal_arc - start_arc);
  const StopPlan plan = plan_stop(current.speed, cruise, result.goal_distance, limits);
  result.overshoot = plan.overshoot;
  result.regime = plan.regime;
  result.trajectory = sample_along(current, path, start_arc, plan.profile, horizon_steps, options);
  return result;
}

RolloutResult goal_conditioned_rollout(
  const AgentState & current, const std::vector<PathPoint> & reference_path,
  const PathPoint & goal, int horizon_steps, const KinematicLimits & limits,
  const RolloutOptions & options)
{
  if (reference_path.empty()) {
    throw std::invalid_argument("reference path is empty");
  }
  return goal_conditioned_rollout(
    current, Polyline(reference_path, current.heading), goal, horizon_steps, limits, options);
}

RolloutResult immediate_stop_rollout(
  const AgentState & current, const Polyline & path, int horizon_steps,
  const KinematicLimits & limits, const RolloutOptions & options)
{
  check_horizon(horizon_steps, options);
  limits.validate();
  const double start_arc = path.project(current.position()).arc_length;
  const double v0 = std::max(0.0, current.speed);
  RolloutResult result;
  SpeedProfile profile(v0);
  if (v0 > 0.0) {
    profile = SpeedProfile(v0, {{v0 / limits.hard_decel, -limits.hard_decel}});
    result.regime = BrakeRegime::kHard;
  }
  result.trajectory = sample_along(current, path, start_arc, profile, horizon_steps, options);
  return result;
}

Trajectory replay_rollout(const AgentRecord & agent, int from_step)
{
  const int horizon = static_cast<int>(agent.reference_future.size());
  if (from_step < 0 || from_step > horizon) {
    throw std::out_of_range(
      "replay step " + std::to_string(from_step) + " outside [0, " + std::to_string(horizon) + "]");
  }
  if (from_step == horizon) {
    AgentState held = agent.reference_future.back();
    held.speed = 0.0;
    return {horizon, {held}};
  }
  Trajectory out;
  out.start_step = from_step;
  out.states.assign(agent.reference_future.begin() + from_step, agent.reference_future.end());
  return out;
}

}  // namespace relsim
