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

#ifndef RELSIM__TRACE_HPP_
#define RELSIM__TRACE_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "relsim/engine.hpp"
#include "relsim/scenario.hpp"

namespace relsim
{

class TraceError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Episode trace document; layout in docs/schemas.md.
nlohmann::json trace_json(const EpisodeResult & result, const Scenario & scenario);

/**
 * One SVG document per trace step: map polylines, agent boxes, committed
 * future positions as dots, relevant agents in a distinct color. Throws
 * TraceError for a malformed trace.
 */
std::vector<std::string> render_frames(const nlohmann::json & trace);

}  // namespace relsim

#endif  // RELSIM__TRACE_HPP_
