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

#include "relsim/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "relsim/rng.hpp"

namespace relsim
{

namespace
{

constexpr double kLaneHalfWidth = 1.75;
constexpr double kMapMargin = 20.0;

PathPoint place(const Placement & pl, double x, double y)
{
  const double c = std::cos(pl.heading);
  const double s = std::sin(pl.heading);
  return {pl.x + c * x - s * y, pl.y + s * x + c * y};
}

// Agent moving at constant speed along a straight line, passing `origin`
// (local frame) at t = 0.
AgentRecord straight_agent(
  const std::string & id, const BoxDims & dims, PathPoint origin, double heading, double speed,
  const SimConfig & cfg, const Placement & pl)
{
  AgentRecord rec;
  rec.id = id;
  rec.kind = AgentKind::kVehicle;
  rec.length = dims.length;
  rec.width = dims.width;
  const double dt = cfg.step_seconds;
  const int observed = static_cast<int>(std::lround(cfg.observed_seconds / dt)) + 1;
  const double world_heading = normalize_angle(heading + pl.heading);
  auto state_at = [&](double t) {
    const PathPoint p = place(
      pl, origin.x + speed * t * std::cos(heading), origin.y + speed * t * std::sin(heading));
    return AgentState{p.x, p.y, world_heading, speed};
  };
  for (int k = observed - 1; k >= 0; --k) {
    rec.observed.push_back(state_at(-k * dt));
  }
  for (int k = 0; k < cfg.horizon_steps(); ++k) {
    rec.reference_future.push_back(state_at((k + 1) * dt));
  }
  return rec;
}

// Lane centerline plus both road edges spanning local x in [x0, x1] along
// `heading` through `origin`.
void add_lane(
  Scenario & sc, PathPoint origin, double heading, double x0, double x1, const Placement & pl)
{
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  auto pt = [&](double along, double lateral) {
    return place(pl, origin.x + c * along - s * lateral, origin.y + s * along + c * lateral);
  };
  sc.map.push_back({MapFeatureType::kLaneCenterline, {pt(x0, 0.0), pt(x1, 0.0)}});
  sc.map.push_back({MapFeatureType::kRoadEdge, {pt(x0, kLaneHalfWidth), pt(x1, kLaneHalfWidth)}});
  sc.map.push_back({MapFeatureType::kRoadEdge, {pt(x0, -kLaneHalfWidth), pt(x1, -kLaneHalfWidth)}});
}

Placement random_placement(Rng & rng)
{
  Placement pl;
  pl.x = rng.uniform(-100.0, 100.0);
  pl.y = rng.uniform(-100.0, 100.0);
  pl.heading = normalize_angle(rng.uniform(-kPi, kPi));
  return pl;
}

}  // namespace

Scenario gen_car_following(const CarFollowingParams & p, std::uint64_t seed)
{
  if (!(p.gap > 0.0)) {
    throw std::invalid_argument("car-following gap must be positive");
  }
  Scenario sc;
  sc.id = "car_following_" + std::to_string(seed);
  sc.config = p.config;
  sc.agents.push_back(
    straight_agent("lead", p.dims, {p.gap, 0.0}, 0.0, p.lead_speed, p.config, p.placement));
  sc.agents.push_back(
    straight_agent("follow", p.dims, {0.0, 0.0}, 0.0, p.follow_speed, p.config, p.placement));
  sc.ego_id = p.ego == EgoRole::kLeader ? "lead" : "follow";
  const double reach = std::max(p.lead_speed, p.follow_speed) * p.config.horizon_seconds;
  add_lane(sc, {0.0, 0.0}, 0.0, -kMapMargin - 2.0 * p.follow_speed, p.gap + reach + kMapMargin,
           p.placement);
  validate_scenario(sc);
  return sc;
}

Scenario gen_crossing(const CrossingParams & p, std::uint64_t seed)
{
  const double a = std::abs(normalize_angle(p.angle));
  if (!(a > 0.0 && a < kPi)) {
    throw std::invalid_argument("crossing angle must satisfy 0 < |angle| < pi");
  }
  if (!(p.speed_a > 0.0 && p.speed_b > 0.0)) {
    throw std::invalid_argument("crossing speeds must be positive");
  }
  const double horizon = p.config.horizon_seconds;
  if (std::abs(p.arrival_offset) >= horizon) {
    throw std::invalid_argument("arrival offset must lie inside the horizon");
  }
  const double t_a = 0.5 * horizon - 0.5 * p.arrival_offset;
  const double t_b = 0.5 * horizon + 0.5 * p.arrival_offset;

  Scenario sc;
  sc.id = "crossing_" + std::to_string(seed);
  sc.config = p.config;
  // Positions at t = 0 sit upstream of the origin by speed * arrival time.
  const double hb = normalize_angle(p.angle);
  sc.agents.push_back(straight_agent(
    "A", p.dims, {-p.speed_a * t_a, 0.0}, 0.0, p.speed_a, p.config, p.placement));
  sc.agents.push_back(straight_agent(
    "B", p.dims, {-p.speed_b * t_b * std::cos(hb), -p.speed_b * t_b * std::sin(hb)}, hb, p.speed_b,
    p.config, p.placement));
  sc.ego_id = p.ego;
  const double before = p.config.observed_seconds + kMapMargin / 5.0;
  add_lane(sc, {0.0, 0.0}, 0.0, -p.speed_a * (t_a + before), p.speed_a * (horizon - t_a) + kMapMargin,
           p.placement);
  add_lane(sc, {0.0, 0.0}, hb, -p.speed_b * (t_b + before), p.speed_b * (horizon - t_b) + kMapMargin,
           p.placement);
  validate_scenario(sc);
  return sc;
}

Scenario gen_chain(const ChainParams & p, std::uint64_t seed)
{
  if (p.gaps.empty()) {
    throw std::invalid_argument("chain needs at least one follower");
  }
  Scenario sc;
  sc.id = "chain_" + std::to_string(seed);
  sc.config = p.config;
  sc.ego_id = "ego";
  sc.agents.push_back(straight_agent("ego", p.dims, {0.0, 0.0}, 0.0, p.speed, p.config, p.placement));
  double x = 0.0;
  for (std::size_t i = 0; i < p.gaps.size(); ++i) {
    if (!(p.gaps[i] > 0.0)) {
      throw std::invalid_argument("chain gaps must be positive");
    }
    x -= p.gaps[i];
    sc.agents.push_back(straight_agent(
      "env" + std::to_string(i + 1), p.dims, {x, 0.0}, 0.0, p.speed, p.config, p.placement));
  }
  add_lane(sc, {0.0, 0.0}, 0.0, x - kMapMargin - 2.0 * p.speed,
           p.speed * p.config.horizon_seconds + kMapMargin, p.placement);
  validate_scenario(sc);
  return sc;
}

Scenario sample_car_following_scene(std::uint64_t seed)
{
  Rng rng(seed);
  CarFollowingParams p;
  p.lead_speed = rng.uniform(6.0, 14.0);
  p.follow_speed = p.lead_speed;
  p.gap = rng.uniform(10.0, 35.0);
  p.ego = EgoRole::kLeader;
  p.placement = random_placement(rng);
  return gen_car_following(p, seed);
}

Scenario sample_chain_scene(std::uint64_t seed)
{
  Rng rng(seed);
  ChainParams p;
  const int agents = rng.uniform_int(3, 10);
  p.gaps.clear();
  for (int i = 1; i < agents; ++i) {
    p.gaps.push_back(rng.uniform(9.0, 14.0));
  }
  p.speed = rng.uniform(9.0, 13.0);
  p.placement = random_placement(rng);
  return gen_chain(p, seed);
}

Scenario sample_crossing_scene(std::uint64_t seed)
{
  Rng rng(seed);
  CrossingParams p;
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  p.angle = sign * rng.uniform(kPi / 4.0, 3.0 * kPi / 4.0);
  p.arrival_offset = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 3.0);
  p.speed_a = rng.uniform(6.0, 12.0);
  p.speed_b = rng.uniform(6.0, 12.0);
  p.ego = rng.uniform() < 0.5 ? "A" : "B";
  p.placement = random_placement(rng);
  return gen_crossing(p, seed);
}

Scenario sample_collision_free_scene(std::uint64_t seed)
{
  Rng rng(seed);
  const int family = rng.uniform_int(0, 2);
  Scenario sc;
  if (family == 0) {
    CarFollowingParams p;
    p.lead_speed = rng.uniform(6.0, 14.0);
    p.follow_speed = p.lead_speed;
    p.gap = rng.uniform(10.0, 35.0);
    p.ego = rng.uniform() < 0.5 ? EgoRole::kLeader : EgoRole::kFollower;
    p.placement = random_placement(rng);
    sc = gen_car_following(p, seed);
  } else if (family == 1) {
    CrossingParams p;
    p.angle = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(kPi / 4.0, 3.0 * kPi / 4.0);
    p.arrival_offset = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(5.0, 7.0);
    p.speed_a = rng.uniform(8.0, 12.0);
    p.speed_b = rng.uniform(8.0, 12.0);
    p.ego = rng.uniform() < 0.5 ? "A" : "B";
    p.placement = random_placement(rng);
    sc = gen_crossing(p, seed);
  } else {
    ChainParams p;
    const int agents = rng.uniform_int(3, 6);
    p.gaps.clear();
    for (int i = 1; i < agents; ++i) {
      p.gaps.push_back(rng.uniform(8.0, 15.0));
    }
    p.speed = rng.uniform(6.0, 13.0);
    p.placement = random_placement(rng);
    sc = gen_chain(p, seed);
  }
  sc.id = "collision_free_" + std::to_string(seed);
  return sc;
}

}  // namespace relsim
