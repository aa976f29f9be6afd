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

#ifndef RELSIM__TRAJECTORY_HPP_
#define RELSIM__TRAJECTORY_HPP_

#include <optional>
#include <vector>

#include "relsim/polyline.hpp"
#include "relsim/scenario.hpp"
#include "relsim/types.hpp"

namespace relsim
{

struct KinematicLimits
{
  double max_accel = 2.0;      //!< [m/s^2]
  double comfort_decel = 3.0;  //!< [m/s^2]
  double hard_decel = 6.0;     //!< [m/s^2]

  /// Throws std::invalid_argument unless all positive and hard >= comfort.
  void validate() const;
};

/// How the stop at the goal was achieved.
enum class BrakeRegime {
  kNone,     //!< no braking needed (stationary or goal out of reach)
  kComfort,  //!< stops at the goal within comfort_decel
  kFirm,     //!< needs more than comfort_decel but at most hard_decel
  kHard,     //!< hard_decel is not enough; the stop overshoots the goal
};

const char * to_string(BrakeRegime regime);

/// Piecewise-constant acceleration speed profile starting at t = 0; the
/// speed is held after the last segment.
class SpeedProfile
{
public:
  struct Segment
  {
    double duration;
    double accel;
  };

  explicit SpeedProfile(double initial_speed, std::vector<Segment> segments = {});

  double speed_at(double t) const;
  double distance_at(double t) const;
  const std::vector<Segment> & segments() const { return segments_; }

private:
  double initial_speed_;
  std::vector<Segment> segments_;
};

struct StopPlan
{
  SpeedProfile profile{0.0};
  double stop_distance = 0.0;  //!< distance travelled until standstill
  double overshoot = 0.0;      //!< stop_distance beyond the goal, >= 0
  BrakeRegime regime = BrakeRegime::kNone;
};

/**
 * Speed profile that reaches `cruise_speed` (accelerating at max_accel or
 * slowing at comfort_decel), holds it, then brakes at comfort_decel to stop
 * exactly `goal_distance` ahead. Falls back to the smallest deceleration
 * that stops at the goal when comfort braking is too weak, and to
 * hard_decel with overshoot when even that is not enough.
 */
StopPlan plan_stop(
  double initial_speed, double cruise_speed, double goal_distance, const KinematicLimits & limits);

struct RolloutOptions
{
  double step_seconds = 0.5;
  int start_step = 0;                  //!< global step of the first output state
  std::optional<double> cruise_speed;  //!< defaults to the current speed
  double goal_offset = 0.0;            //!< stop this far before the goal [m]
};

struct RolloutResult
{
  Trajectory trajectory;
  double goal_distance = 0.0;  //!< arc length from the start to the stop target
  double overshoot = 0.0;
  BrakeRegime regime = BrakeRegime::kNone;
};

/**
 * Follows `reference_path` from the projection of `current` and stops at
 * the goal's projection (minus `goal_offset`), holding still afterwards.
 * Output covers `horizon_steps` samples, the first one step after `current`.
 */
RolloutResult goal_conditioned_rollout(
  const AgentState & current, const Polyline & reference_path, const PathPoint & goal,
  int horizon_steps, const KinematicLimits & limits, const RolloutOptions & options = {});

/// Same, from raw path points; throws std::invalid_argument for an empty path.
RolloutResult goal_conditioned_rollout(
  const AgentState & current, const std::vector<PathPoint> & reference_path,
  const PathPoint & goal, int horizon_steps, const KinematicLimits & limits,
  const RolloutOptions & options = {});

/// Brakes at hard_decel to a standstill along the path.
RolloutResult immediate_stop_rollout(
  const AgentState & current, const Polyline & reference_path, int horizon_steps,
  const KinematicLimits & limits, const RolloutOptions & options = {});

/**
 * Logged future from `from_step` on. `from_step == T` yields a single held
 * terminal state (speed zero); outside [0, T] throws std::out_of_range.
 */
Trajectory replay_rollout(const AgentRecord & agent, int from_step);

}  // namespace relsim

#endif  // RELSIM__TRAJECTORY_HPP_
