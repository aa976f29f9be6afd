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

#ifndef RELSIM__CLI_HPP_
#define RELSIM__CLI_HPP_

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "relsim/engine.hpp"
#include "relsim/metrics.hpp"
#include "relsim/planners.hpp"
#include "relsim/scenario.hpp"

namespace relsim::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Bad flags or flag values; reported with exit code 2.
class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct EpisodeRow
{
  std::string scenario_id;
  std::string policy;
  EpisodeMetrics metrics;
};

struct BatchOutput
{
  std::vector<BatchRow> rows;          //!< one per policy, in the requested order
  std::vector<EpisodeRow> episodes;    //!< scenario-major, then policy
};

/**
 * Runs every (scenario, policy) episode on `workers` threads. Episode i of
 * scenario j uses seed `seed + j`; results do not depend on `workers`.
 */
BatchOutput run_batch(
  const std::vector<Scenario> & scenarios, const std::vector<ResolutionPolicy> & policies,
  const PlannerSpec & planner, std::uint64_t seed, int workers);

std::string episodes_csv(const std::vector<EpisodeRow> & episodes);

/// Entry point of the relsim executable. Returns the process exit code.
int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

}  // namespace relsim::cli

#endif  // RELSIM__CLI_HPP_
