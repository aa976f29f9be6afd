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

#ifndef RELSIM__TYPES_HPP_
#define RELSIM__TYPES_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace relsim
{

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// Smallest absolute difference between two headings, in [0, pi].
double heading_difference(double a, double b);

struct PathPoint
{
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PathPoint &, const PathPoint &) = default;
};

double distance(const PathPoint & a, const PathPoint & b);

struct AgentState
{
  double x = 0.0;        //!< [m]
  double y = 0.0;        //!< [m]
  double heading = 0.0;  //!< [rad], CCW from +x
  double speed = 0.0;    //!< [m/s], nonnegative

  PathPoint position() const { return {x, y}; }

  friend bool operator==(const AgentState &, const AgentState &) = default;
};

/// Footprint of an agent; the agent position is the box center.
struct BoxDims
{
  double length = 4.5;
  double width = 2.0;

  friend bool operator==(const BoxDims &, const BoxDims &) = default;
};

/**
 * Kinematic states sampled at a fixed step interval.
 *
 * `states[j]` is the state at global step `start_step + j`. Step k is the
 * sample taken (k + 1) * step_seconds after the start of the episode, so a
 * scenario's reference future occupies steps [0, horizon_steps).
 */
struct Trajectory
{
  int start_step = 0;
  std::vector<AgentState> states;

  bool empty() const { return states.empty(); }
  int size() const { return static_cast<int>(states.size()); }
  int end_step() const { return start_step + size(); }
  bool covers(int step) const { return step >= start_step && step < end_step(); }

  /// State at a global step; throws std::out_of_range when not covered.
  const AgentState & at(int step) const;

  /// The part of the trajectory from `from_step` onward (global step).
  Trajectory tail(int from_step) const;

  std::vector<PathPoint> positions() const;

  friend bool operator==(const Trajectory &, const Trajectory &) = default;
};

/// Largest pointwise position distance over the steps covered by both.
double max_pointwise_distance(const Trajectory & a, const Trajectory & b);

}  // namespace relsim

#endif  // RELSIM__TYPES_HPP_
