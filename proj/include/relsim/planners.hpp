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

#ifndef RELSIM__PLANNERS_HPP_
#define RELSIM__PLANNERS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "relsim/scenario.hpp"
#include "relsim/types.hpp"

namespace relsim
{

enum class PlannerKind { kReplay, kPerturbed, kSlowdown };

const char * to_string(PlannerKind kind);
/// Throws std::invalid_argument for unknown names.
PlannerKind parse_planner_kind(std::string_view text);

struct PlannerSpec
{
  PlannerKind kind = PlannerKind::kReplay;
  std::optional<double> speed_scale;  //!< perturbed; drawn per episode in [0.85, 1.15] if unset
  double lateral_sigma = 0.3;         //!< perturbed [m]
  double decel = 1.5;                 //!< slowdown [m/s^2]

  /// Throws std::invalid_argument for out-of-range parameters.
  void validate() const;
};

struct PerturbParams
{
  double speed_scale = 1.0;
  double lateral_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Ego log future from `step` on.
Trajectory replay_plan(const Scenario & scenario, int step);

/**
 * Ego log future re-timed by speed_scale along the logged path (holding at
 * the last logged position once it is reached) plus a smooth lateral offset
 * with standard deviation lateral_sigma, clipped to 2 * lateral_sigma and
 * faded in over the first second.
 */
Trajectory perturbed_plan(const Scenario & scenario, int step, const PerturbParams & params);

/**
 * Constant deceleration from the ego's current speed, v = max(0, v0 - decel * t),
 * capped at each step by the logged speed. Positions follow the logged path.
 */
Trajectory slowdown_plan(const Scenario & scenario, int step, double decel);

class Planner
{
public:
  virtual ~Planner() = default;
  virtual std::string name() const = 0;
  /// Called once before an episode.
  virtual void reset(const Scenario & scenario, std::uint64_t seed) = 0;
  /// Plan covering [step, horizon).
  virtual Trajectory plan(const Scenario & scenario, int step) = 0;
};

std::unique_ptr<Planner> make_planner(const PlannerSpec & spec);

}  // namespace relsim

#endif  // RELSIM__PLANNERS_HPP_
