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

#ifndef RELSIM__POLYLINE_HPP_
#define RELSIM__POLYLINE_HPP_

#include <limits>
#include <vector>

#include "relsim/types.hpp"

namespace relsim
{

struct PathProjection
{
  double arc_length = 0.0;  //!< along the polyline, clamped to [lo, length]
  double distance = 0.0;    //!< from the query point to the projected point
};

/**
 * Arc-length parametrized polyline. Consecutive duplicate vertices are
 * dropped; a polyline collapsed to a single vertex has zero length and
 * reports `fallback_heading` as its tangent.
 *
 * Evaluation beyond either end extrapolates along the end segment.
 */
class Polyline
{
public:
  Polyline(std::vector<PathPoint> points, double fallback_heading = 0.0);

  double length() const { return cumulative_.back(); }
  const std::vector<PathPoint> & points() const { return points_; }

  PathPoint point_at(double arc_length) const;
  double heading_at(double arc_length) const;

  /// Nearest point with arc length >= `min_arc_length`.
  PathProjection project(
    const PathPoint & p,
    double min_arc_length = -std::numeric_limits<double>::infinity()) const;

private:
  std::size_t segment_for(double arc_length) const;

  std::vector<PathPoint> points_;
  std::vector<double> cumulative_;
  double fallback_heading_;
};

}  // namespace relsim

#endif  // RELSIM__POLYLINE_HPP_
