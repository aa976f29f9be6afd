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

#ifndef RELSIM__GEOMETRY_HPP_
#define RELSIM__GEOMETRY_HPP_

#include <array>
#include <optional>
#include <vector>

#include "relsim/types.hpp"

namespace relsim
{

struct OrientedBox
{
  double center_x = 0.0;
  double center_y = 0.0;
  double heading = 0.0;  //!< [rad], CCW from +x
  double length = 0.0;   //!< along heading
  double width = 0.0;

  std::array<PathPoint, 4> corners() const;
};

OrientedBox box_at(const AgentState & state, const BoxDims & dims);

/// Closed-rectangle intersection test (touching counts). Separating-axis
/// test over the two boxes' edge normals.
bool boxes_overlap(const OrientedBox & a, const OrientedBox & b);

/// Convex intersection region of two boxes; empty when they do not overlap
/// with positive area.
std::vector<PathPoint> overlap_polygon(const OrientedBox & a, const OrientedBox & b);

/**
 * First global step >= `from_step` at which the two agents' boxes overlap.
 *
 * Both trajectories must cover the same step range; throws
 * std::invalid_argument otherwise, or when `from_step` lies outside
 * [start_step, end_step]. `from_step == end_step` yields empty.
 */
std::optional<int> first_collision_step(
  const Trajectory & traj_a, const Trajectory & traj_b, const BoxDims & dims_a,
  const BoxDims & dims_b, int from_step);

enum class CrossKind { kPathCrossing, kSameLaneCollision };

const char * to_string(CrossKind kind);

struct CrossPoint
{
  PathPoint point;
  int index_a = 0;  //!< global step at which agent A reaches the point
  int index_b = 0;
  bool reaches_a = true;  //!< false: A never reaches it; index_a is A's last step
  bool reaches_b = true;
  CrossKind kind = CrossKind::kPathCrossing;
  double angle = 0.0;  //!< angle between the agents' directions at the point, [0, pi]
};

/**
 * Conflict target point for two trajectories.
 *
 * Returns the first intersection of the center-point polylines (ordered by
 * the summed arc lengths along both paths) when one exists. Otherwise, if
 * the boxes collide, the midpoint between the two centers at the first
 * collision step. Empty if neither.
 */
std::optional<CrossPoint> cross_point(
  const Trajectory & traj_a, const Trajectory & traj_b, const BoxDims & dims_a,
  const BoxDims & dims_b);

/**
 * First global step at which the agent's center is at or past `point` along
 * its own heading while within `lateral_tolerance` of it sideways.
 */
std::optional<int> arrival_step(
  const Trajectory & traj, const PathPoint & point, double lateral_tolerance);

/// Intersection of two closed segments; empty for parallel segments.
std::optional<PathPoint> segment_intersection(
  const PathPoint & p0, const PathPoint & p1, const PathPoint & q0, const PathPoint & q1);

}  // namespace relsim

#endif  // RELSIM__GEOMETRY_HPP_
