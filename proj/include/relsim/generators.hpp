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

#ifndef RELSIM__GENERATORS_HPP_
#define RELSIM__GENERATORS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "relsim/scenario.hpp"

namespace relsim
{

/// Rigid transform applied to a whole generated scene.
struct Placement
{
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

enum class EgoRole { kLeader, kFollower };

struct CarFollowingParams
{
  double gap = 20.0;  //!< center-to-center distance at t = 0 [m]
  double lead_speed = 10.0;
  double follow_speed = 10.0;
  EgoRole ego = EgoRole::kLeader;
  BoxDims dims{4.5, 2.0};
  Placement placement;
  SimConfig config;
};

/// Two vehicles ("lead", "follow") on one straight lane with constant-speed
/// reference futures. Throws std::invalid_argument when gap <= 0.
Scenario gen_car_following(const CarFollowingParams & params, std::uint64_t seed);

struct CrossingParams
{
  double angle = kPi / 2.0;     //!< heading of B relative to A, |angle| in (0, pi)
  double arrival_offset = 0.0;  //!< B reaches the crossing this much later than A [s]
  double speed_a = 10.0;
  double speed_b = 10.0;
  std::string ego = "A";
  BoxDims dims{4.5, 2.0};
  Placement placement;
  SimConfig config;
};

/**
 * Agents "A" and "B" on straight paths through the origin. A reaches the
 * origin at horizon/2 - offset/2 and B at horizon/2 + offset/2, so the
 * offset must stay inside (-horizon, horizon).
 */
Scenario gen_crossing(const CrossingParams & params, std::uint64_t seed);

struct ChainParams
{
  std::vector<double> gaps{10.0, 10.0};  //!< center gaps, front to back; one per follower
  double speed = 10.0;
  BoxDims dims{4.5, 2.0};
  Placement placement;
  SimConfig config;
};

/// "ego" in front followed by "env1", "env2", ... on one lane, all at the
/// same constant speed.
Scenario gen_chain(const ChainParams & params, std::uint64_t seed);

// Seeded scene samplers used by the batch sweeps and the acceptance suite.
// Each draws its parameters and a random placement from the seed.

/// Car-following with the ego in front, equal speeds in [6, 14] m/s and a
/// gap in [10, 35] m.
Scenario sample_car_following_scene(std::uint64_t seed);

/// Chain of 3 to 10 agents, gaps in [9, 14] m, speed in [9, 13] m/s.
Scenario sample_chain_scene(std::uint64_t seed);

/// Crossing at |angle| in [pi/4, 3pi/4] with |arrival_offset| in [0.5, 3] s.
Scenario sample_crossing_scene(std::uint64_t seed);

/// Scenes whose reference futures are collision-free by construction.
Scenario sample_collision_free_scene(std::uint64_t seed);

}  // namespace relsim

#endif  // RELSIM__GENERATORS_HPP_
