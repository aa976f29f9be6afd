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

#include "relsim/polyline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relsim
{

namespace
{
constexpr double kDuplicateTolerance = 1e-9;
}  // namespace

Polyline::Polyline(std::vector<PathPoint> points, double fallback_heading)
: fallback_heading_(fallback_heading)
{
  if (points.empty()) {
    throw std::invalid_argument("polyline requires at least one point");
  }
  points_.reserve(points.size());
  for (const auto & p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw std::invalid_argument("polyline point is not finite");
    }
    if (points_.empty() || distance(points_.back(), p) > kDuplicateTolerance) {
      points_.push_back(p);
    }
  }
  cumulative_.resize(points_.size(), 0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + distance(points_[i - 1], points_[i]);
  }
}

std::size_t Polyline::segment_for(double arc_length) const
{
  // Index i of the segment [i, i+1] containing arc_length, clamped.
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), arc_length);
  std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  return std::min(i, points_.size() - 2);
}

PathPoint Polyline::point_at(double arc_length) const
{
  if (points_.size() == 1) {
    return points_.front();
  }
  const std::size_t i = segment_for(arc_length);
  const PathPoint & a = points_[i];
  const PathPoint & b = points_[i + 1];
  const double seg = cumulative_[i + 1] - cumulative_[i];
  const double t = (arc_length - cumulative_[i]) / seg;
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

double Polyline::heading_at(double arc_length) const
{
  if (points_.size() == 1) {
    return fallback_heading_;
  }
  const std::size_t i = segment_for(arc_length);
  const PathPoint & a = points_[i];
  const PathPoint & b = points_[i + 1];
  return std::atan2(b.y - a.y, b.x - a.x);
}

PathProjection Polyline::project(const PathPoint & p, double min_arc_length) const
{
  const double lo = std::clamp(min_arc_length, 0.0, length());
  if (points_.size() == 1) {
    return {0.0, distance(p, points_.front())};
  }
  PathProjection best{lo, distance(p, point_at(lo))};
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    if (cumulative_[i + 1] < lo) {
      continue;
    }
    const PathPoint & a = points_[i];
    const PathPoint & b = points_[i + 1];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double seg = cumulative_[i + 1] - cumulative_[i];
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / (seg * seg);
    t = std::clamp(t, 0.0, 1.0);
    double s = cumulative_[i] + t * seg;
    if (s < lo) {
      s = lo;
    }
    const double d = distance(p, point_at(s));
    if (d < best.distance - 1e-12) {
      best = {s, d};
    }
  }
  return best;
}

}  // namespace relsim
