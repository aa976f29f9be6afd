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

#include "relsim/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relsim
{

double normalize_angle(double angle)
{
  double wrapped = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (wrapped <= -kPi) {
    wrapped += 2.0 * kPi;
  }
  return wrapped;
}

double heading_difference(double a, double b)
{
  return std::abs(normalize_angle(a - b));
}

double distance(const PathPoint & a, const PathPoint & b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

const AgentState & Trajectory::at(int step) const
{
  if (!covers(step)) {
    throw std::out_of_range(
      "trajectory does not cover step " + std::to_string(step) + " (range [" +
      std::to_string(start_step) + ", " + std::to_string(end_step()) + "))");
  }
  return states[static_cast<std::size_t>(step - start_step)];
}

Trajectory Trajectory::tail(int from_step) const
{
  if (from_step < start_step || from_step > end_step()) {
    throw std::out_of_range("tail start " + std::to_string(from_step) + " outside trajectory");
  }
  Trajectory out;
  out.start_step = from_step;
  out.states.assign(states.begin() + (from_step - start_step), states.end());
  return out;
}

std::vector<PathPoint> Trajectory::positions() const
{
  std::vector<PathPoint> out;
  out.reserve(states.size());
  for (const auto & s : states) {
    out.push_back(s.position());
  }
  return out;
}

double max_pointwise_distance(const Trajectory & a, const Trajectory & b)
{
  const int lo = std::max(a.start_step, b.start_step);
  const int hi = std::min(a.end_step(), b.end_step());
  double worst = 0.0;
  for (int k = lo; k < hi; ++k) {
    worst = std::max(worst, distance(a.at(k).position(), b.at(k).position()));
  }
  return worst;
}

}  // namespace relsim
