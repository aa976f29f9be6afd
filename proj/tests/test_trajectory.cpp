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
#include "relsim/rng.hpp"
#include "relsim/trajectory.hpp"

namespace relsim
{
namespace
{

const KinematicLimits kLimits;  // 2 / 3 / 6 m/s^2

std::vector<PathPoint> straight_path(double length)
{
  return {{0.0, 0.0}, {length, 0.0}};
}

double min_distance_to_path(const PathPoint & p, const std::vector<PathPoint> & path)
{
  double best = 1e300;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    best = std::min(
      best, oracle::point_segment_distance(
              p.x, p.y, path[i].x, path[i].y, path[i + 1].x, path[i + 1].y));
  }
  return best;
}

TEST(KinematicLimits, Validate)
{
  EXPECT_NO_THROW(kLimits.validate());
  EXPECT_THROW((KinematicLimits{2.0, 3.0, 2.0}.validate()), std::invalid_argument);
  EXPECT_THROW((KinematicLimits{0.0, 3.0, 6.0}.validate()), std::invalid_argument);
}

TEST(SpeedProfile, PiecewiseIntegration)
{
  const SpeedProfile p(10.0, {{2.0, -2.0}, {1.0, 0.0}, {3.0, -2.0}});
  EXPECT_DOUBLE_EQ(p.speed_at(1.0), 8.0);
  EXPECT_DOUBLE_EQ(p.speed_at(2.5), 6.0);
  EXPECT_DOUBLE_EQ(p.speed_at(6.0), 0.0);
  EXPECT_DOUBLE_EQ(p.speed_at(10.0), 0.0);
  EXPECT_DOUBLE_EQ(p.distance_at(2.0), 16.0);
  EXPECT_DOUBLE_EQ(p.distance_at(3.0), 22.0);
  EXPECT_DOUBLE_EQ(p.distance_at(100.0), 31.0);
}

TEST(PlanStop, RegimesFollowClosedForm)
{
  // Comfort: 100 / 6 = 16.67 m needed, 20 m available.
  auto plan = plan_stop(10.0, 10.0, 20.0, kLimits);
  EXPECT_EQ(plan.regime, BrakeRegime::kComfort);
  EXPECT_NEAR(plan.stop_distance, 20.0, 1e-9);
  EXPECT_DOUBLE_EQ(plan.overshoot, 0.0);

  // Firm: 12 m lies between 100 / 12 and 100 / 6.
  plan = plan_stop(10.0, 10.0, 12.0, kLimits);
  EXPECT_EQ(plan.regime, BrakeRegime::kFirm);
  EXPECT_NEAR(plan.stop_distance, 12.0, 1e-9);

  // Hard: even 6 m/s^2 needs 8.33 m.
  plan = plan_stop(10.0, 10.0, 5.0, kLimits);
  EXPECT_EQ(plan.regime, BrakeRegime::kHard);
  EXPECT_NEAR(plan.stop_distance, oracle::stopping_distance(10.0, 6.0), 1e-9);
  EXPECT_NEAR(plan.overshoot, oracle::stopping_distance(10.0, 6.0) - 5.0, 1e-9);

  plan = plan_stop(0.0, 0.0, 10.0, kLimits);
  EXPECT_EQ(plan.regime, BrakeRegime::kNone);
  EXPECT_DOUBLE_EQ(plan.stop_distance, 0.0);
}

TEST(GoalConditionedRollout, StationaryAtGoal)
{
  const AgentState now{3.0, 0.0, 0.0, 0.0};
  const auto r = goal_conditioned_rollout(now, straight_path(50), {3.0, 0.0}, 16, kLimits);
  ASSERT_EQ(r.trajectory.size(), 16);
  for (const auto & s : r.trajectory.states) {
    EXPECT_EQ(s, r.trajectory.states.front());
    EXPECT_NEAR(s.x, 3.0, 1e-12);
    EXPECT_DOUBLE_EQ(s.speed, 0.0);
  }
}

TEST(GoalConditionedRollout, ComfortStopReachesGoal)
{
  const AgentState now{0.0, 0.0, 0.0, 10.0};
  const auto r = goal_conditioned_rollout(now, straight_path(100), {20.0, 0.0}, 16, kLimits);
  EXPECT_EQ(r.regime, BrakeRegime::kComfort);
  EXPECT_LE(oracle::stopping_distance(10.0, 3.0), 20.0);
  EXPECT_NEAR(r.trajectory.states.back().x, 20.0, 0.5);
  EXPECT_DOUBLE_EQ(r.trajectory.states.back().speed, 0.0);
  EXPECT_DOUBLE_EQ(r.overshoot, 0.0);
}

TEST(GoalConditionedRollout, InfeasibleGoalOvershoots)
{
  const AgentState now{0.0, 0.0, 0.0, 10.0};
  const auto r = goal_conditioned_rollout(now, straight_path(100), {5.0, 0.0}, 16, kLimits);
  EXPECT_EQ(r.regime, BrakeRegime::kHard);
  const double expected = oracle::stopping_distance(10.0, kLimits.hard_decel);
  EXPECT_NEAR(r.overshoot, expected - 5.0, 1e-9);
  EXPECT_NEAR(r.trajectory.states.back().x, expected, 1e-9);
}

TEST(GoalConditionedRollout, GoalOffsetStopsShort)
{
  const AgentState now{0.0, 0.0, 0.0, 8.0};
  RolloutOptions opts;
  opts.goal_offset = 6.5;
  const auto r = goal_conditioned_rollout(now, straight_path(100), {40.0, 0.0}, 16, kLimits, opts);
  EXPECT_NEAR(r.goal_distance, 33.5, 1e-9);
  EXPECT_NEAR(r.trajectory.states.back().x, 33.5, 1e-6);
}

TEST(GoalConditionedRollout, StartStepAndCruise)
{
  const AgentState now{0.0, 0.0, 0.0, 4.0};
  RolloutOptions opts;
  opts.start_step = 5;
  opts.cruise_speed = 8.0;
  const auto r = goal_conditioned_rollout(now, straight_path(500), {400.0, 0.0}, 11, kLimits, opts);
  EXPECT_EQ(r.trajectory.start_step, 5);
  EXPECT_EQ(r.trajectory.end_step(), 16);
  // Accelerates at 2 m/s^2 from 4 to 8, reached after 2 s (four samples).
  EXPECT_NEAR(r.trajectory.states[0].speed, 5.0, 1e-9);
  EXPECT_NEAR(r.trajectory.states[3].speed, 8.0, 1e-9);
  EXPECT_NEAR(r.trajectory.states[10].speed, 8.0, 1e-9);
}

TEST(GoalConditionedRollout, EmptyPathRejected)
{
  EXPECT_THROW(
    goal_conditioned_rollout({}, std::vector<PathPoint>{}, {1.0, 0.0}, 16, kLimits),
    std::invalid_argument);
}

TEST(GoalConditionedRollout, FollowsCurvedPath)
{
  std::vector<PathPoint> arc;
  for (int i = 0; i <= 90; ++i) {
    const double a = i * kPi / 180.0;
    arc.push_back({50.0 * std::sin(a), 50.0 - 50.0 * std::cos(a)});
  }
  const AgentState now{0.0, 0.0, 0.0, 10.0};
  const auto r = goal_conditioned_rollout(now, arc, arc[60], 16, kLimits);
  for (const auto & s : r.trajectory.states) {
    EXPECT_LT(min_distance_to_path(s.position(), arc), 0.1);
  }
  EXPECT_LT(distance(r.trajectory.states.back().position(), arc[60]), 0.5);
}

// Randomized (v0, goal distance) cases checked against constant-deceleration
// kinematics.
TEST(GoalConditionedRollout, KinematicProperties)
{
  Rng rng(7);
  const double dt = 0.5;
  const int steps = 60;
  for (int i = 0; i < 100; ++i) {
    const double v0 = rng.uniform(0.0, 20.0);
    const double goal = rng.uniform(0.0, 80.0);
    RolloutOptions opts;
    opts.cruise_speed = std::max(v0, 5.0);
    const AgentState now{0.0, 0.0, 0.0, v0};
    const auto r = goal_conditioned_rollout(now, straight_path(300), {goal, 0.0}, steps, kLimits, opts);
    ASSERT_EQ(r.trajectory.size(), steps);
    double prev_speed = v0;
    double prev_x = 0.0;
    for (const auto & s : r.trajectory.states) {
      EXPECT_GE(s.speed, 0.0);
      EXPECT_LE(
        std::abs(s.speed - prev_speed),
        std::max(kLimits.max_accel, kLimits.hard_decel) * dt + 1e-6);
      EXPECT_GE(s.x, prev_x - 1e-9);
      EXPECT_NEAR(s.y, 0.0, 1e-9);
      prev_speed = s.speed;
      prev_x = s.x;
    }
    const auto & last = r.trajectory.states.back();
    if (oracle::stopping_distance(v0, kLimits.hard_decel) <= goal) {
      EXPECT_NEAR(last.x, goal, 0.5) << "v0 " << v0 << " goal " << goal;
      EXPECT_LT(last.speed, 0.1);
      EXPECT_DOUBLE_EQ(r.overshoot, 0.0);
    } else {
      EXPECT_EQ(r.regime, BrakeRegime::kHard);
      EXPECT_NEAR(last.x, oracle::stopping_distance(v0, kLimits.hard_decel), 1e-6);
      EXPECT_GT(r.overshoot, 0.0);
    }
  }
}

TEST(ImmediateStopRollout, StoppingDistanceMatchesClosedForm)
{
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const double v0 = rng.uniform(0.5, 25.0);
    const auto r = immediate_stop_rollout({0.0, 0.0, 0.0, v0}, Polyline(straight_path(300)), 16, kLimits);
    const double expected = oracle::stopping_distance(v0, kLimits.hard_decel);
    EXPECT_NEAR(r.trajectory.states.back().x, expected, 0.02 * expected);
    EXPECT_DOUBLE_EQ(r.trajectory.states.back().speed, 0.0);
    EXPECT_EQ(r.regime, BrakeRegime::kHard);
  }
}

TEST(ReplayRollout, TailsOfTheLog)
{
  const auto s = gen_crossing({}, 0);
  const auto & a = s.agent("A");
  const auto full = replay_rollout(a, 0);
  EXPECT_EQ(full.states, a.reference_future);
  EXPECT_EQ(full.start_step, 0);
  const auto tail = replay_rollout(a, 10);
  EXPECT_EQ(tail.start_step, 10);
  ASSERT_EQ(tail.size(), 6);
  EXPECT_EQ(tail.states[0], a.reference_future[10]);

  const auto held = replay_rollout(a, 16);
  ASSERT_EQ(held.size(), 1);
  EXPECT_EQ(held.start_step, 16);
  EXPECT_EQ(held.states[0].position(), a.goal());
  EXPECT_DOUBLE_EQ(held.states[0].speed, 0.0);

  EXPECT_THROW(replay_rollout(a, 17), std::out_of_range);
  EXPECT_THROW(replay_rollout(a, -1), std::out_of_range);
}

TEST(ReplayRollout, ZeroDisplacementError)
{
  const auto s = gen_chain({}, 0);
  for (const auto & a : s.agents) {
    const auto t = replay_rollout(a, 0);
    double total = 0.0;
    for (int k = 0; k < t.size(); ++k) {
      total += distance(t.states[k].position(), a.reference_future[k].position());
    }
    EXPECT_DOUBLE_EQ(total, 0.0);
  }
}

}  // namespace
}  // namespace relsim
