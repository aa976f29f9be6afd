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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "relsim/generators.hpp"
#include "relsim/planners.hpp"

namespace relsim
{
namespace
{

Scenario lead_ego(double speed)
{
  CarFollowingParams p;
  p.lead_speed = speed;
  p.follow_speed = speed;
  return gen_car_following(p, 0);
}

TEST(ReplayPlan, SuffixOfLog)
{
  const auto s = sample_crossing_scene(4);
  const auto full = replay_plan(s, 0);
  EXPECT_EQ(full.states, s.ego().reference_future);
  for (int k = 0; k < 16; ++k) {
    const auto tail = replay_plan(s, k);
    EXPECT_EQ(tail.start_step, k);
    EXPECT_EQ(tail.states.front(), s.ego().reference_future[k]);
    EXPECT_EQ(tail.end_step(), 16);
  }
}

TEST(SlowdownPlan, ConstantDecelerationFromCurrentSpeed)
{
  const auto s = lead_ego(10.0);
  const auto plan = slowdown_plan(s, 0, 1.5);
  ASSERT_EQ(plan.size(), 16);
  // The current speed 10 is the sample before step 0.
  EXPECT_DOUBLE_EQ(plan.states[0].speed, 9.25);
  EXPECT_DOUBLE_EQ(plan.states[1].speed, 8.5);
  // v0 / decel = 6.67 s: last positive sample at 6.5 s, zero from 7.0 s.
  EXPECT_NEAR(plan.states[12].speed, 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(plan.states[13].speed, 0.0);
  EXPECT_DOUBLE_EQ(plan.states[15].speed, 0.0);
  // Trapezoid-integrated distance: 10^2 / (2 * 1.5) = 33.33 m by standstill,
  // up to the half-step discretisation of the stop instant.
  const double travelled = plan.states.back().x - s.ego().current().x;
  EXPECT_NEAR(travelled, oracle::stopping_distance(10.0, 1.5), 0.1);
  for (const auto & st : plan.states) {
    EXPECT_NEAR(st.y, s.ego().current().y, 1e-9);
  }
}

TEST(SlowdownPlan, CappedByLogSpeed)
{
  auto s = lead_ego(10.0);
  for (auto & a : s.agents) {
    if (a.id == s.ego_id) {
      a.reference_future[3].speed = 4.0;  // t = 2 s, where the profile gives 7
    }
  }
  const auto plan = slowdown_plan(s, 0, 1.5);
  EXPECT_DOUBLE_EQ(plan.states[3].speed, 4.0);
  EXPECT_DOUBLE_EQ(plan.states[4].speed, 6.25);
}

TEST(SlowdownPlan, StationaryEgoStaysPut)
{
  const auto s = lead_ego(0.0);
  const auto plan = slowdown_plan(s, 0, 1.5);
  for (const auto & st : plan.states) {
    EXPECT_DOUBLE_EQ(st.speed, 0.0);
    EXPECT_EQ(st.position(), s.ego().current().position());
  }
}

TEST(SlowdownPlan, SpeedsBoundedAndNonIncreasing)
{
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = sample_chain_scene(seed);
    const auto plan = slowdown_plan(s, 0, 1.5);
    double prev = s.ego().current().speed;
    for (int k = 0; k < plan.size(); ++k) {
      const double v = plan.states[k].speed;
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, s.ego().reference_future[k].speed + 1e-12);
      EXPECT_LE(v, prev + 1e-12);
      prev = v;
    }
  }
}

TEST(SlowdownPlan, RejectsNonPositiveDecel)
{
  EXPECT_THROW(slowdown_plan(lead_ego(10.0), 0, 0.0), std::invalid_argument);
}

TEST(PerturbedPlan, NullParametersAreReplay)
{
  const auto s = sample_crossing_scene(9);
  const PerturbParams p{1.0, 0.0, 42};
  for (int k : {0, 5, 15}) {
    const auto got = perturbed_plan(s, k, p);
    const auto want = replay_plan(s, k);
    ASSERT_EQ(got.size(), want.size());
    for (int i = 0; i < got.size(); ++i) {
      EXPECT_NEAR(got.states[i].x, want.states[i].x, 1e-9);
      EXPECT_NEAR(got.states[i].y, want.states[i].y, 1e-9);
      EXPECT_NEAR(got.states[i].speed, want.states[i].speed, 1e-9);
    }
  }
}

TEST(PerturbedPlan, RetimedBySpeedScale)
{
  const auto s = lead_ego(10.0);
  const auto plan = perturbed_plan(s, 0, {0.8, 0.0, 1});
  double prev = s.ego().current().x;
  for (const auto & st : plan.states) {
    EXPECT_NEAR(st.x - prev, 4.0, 1e-9);
    EXPECT_NEAR(st.speed, 8.0, 1e-9);
    prev = st.x;
  }
}

TEST(PerturbedPlan, DeterministicAndLaterallyBounded)
{
  const auto s = lead_ego(10.0);
  const PerturbParams p{1.1, 0.3, 5};
  const auto a = perturbed_plan(s, 0, p);
  EXPECT_EQ(a, perturbed_plan(s, 0, p));
  EXPECT_NE(a, perturbed_plan(s, 0, {1.1, 0.3, 6}));
  const double lane_y = s.ego().current().y;
  double max_offset = 0.0;
  for (const auto & st : a.states) {
    max_offset = std::max(max_offset, std::abs(st.y - lane_y));
  }
  EXPECT_LE(max_offset, 2.0 * p.lateral_sigma + 1e-9);
  EXPECT_GT(max_offset, 0.0);
  // Scale >= 1 reaches the logged goal, so the endpoint is within 2 sigma.
  EXPECT_LE(distance(a.states.back().position(), s.ego().goal()), 2.0 * p.lateral_sigma + 1e-9);
}

TEST(PlannerSpec, Validation)
{
  PlannerSpec spec;
  EXPECT_NO_THROW(spec.validate());
  spec.speed_scale = 1.5;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.speed_scale = 0.7;
  EXPECT_NO_THROW(spec.validate());
  spec.decel = 0.0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.decel = 1.5;
  spec.lateral_sigma = -0.1;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  EXPECT_EQ(parse_planner_kind("slowdown"), PlannerKind::kSlowdown);
  EXPECT_THROW(parse_planner_kind("idm"), std::invalid_argument);
}

TEST(Planner, ObjectsReturnHorizonAlignedTails)
{
  const auto s = sample_chain_scene(2);
  for (auto kind : {PlannerKind::kReplay, PlannerKind::kPerturbed, PlannerKind::kSlowdown}) {
    PlannerSpec spec;
    spec.kind = kind;
    auto planner = make_planner(spec);
    EXPECT_EQ(planner->name(), to_string(kind));
    planner->reset(s, 3);
    const auto full = planner->plan(s, 0);
    for (int k = 0; k < 16; ++k) {
      const auto tail = planner->plan(s, k);
      EXPECT_EQ(tail.start_step, k);
      EXPECT_EQ(tail.end_step(), 16);
      EXPECT_EQ(tail.states.front(), full.states[k]);
    }
  }
}

TEST(Planner, PerturbedDrawsScalePerSeed)
{
  const auto s = lead_ego(10.0);
  PlannerSpec spec;
  spec.kind = PlannerKind::kPerturbed;
  spec.lateral_sigma = 0.0;
  auto planner = make_planner(spec);
  planner->reset(s, 1);
  const auto a = planner->plan(s, 0);
  planner->reset(s, 1);
  EXPECT_EQ(a, planner->plan(s, 0));
  const double scale = a.states[0].speed / 10.0;
  EXPECT_GE(scale, 0.85);
  EXPECT_LE(scale, 1.15);
}

}  // namespace
}  // namespace relsim
