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

#include "relsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace relsim
{

namespace
{

// Slack on the separating-axis comparison so exactly touching boxes stay
// colliding under rounding.
constexpr double kTouchSlack = 1e-9;
constexpr double kMinSegment = 1e-9;

struct Vec2
{
  double x;
  double y;
};

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

double projected_radius(const OrientedBox & box, Vec2 axis)
{
  const Vec2 along{std::cos(box.heading), std::sin(box.heading)};
  const Vec2 normal{-along.y, along.x};
  return 0.5 * box.length * std::abs(dot(along, axis)) +
         0.5 * box.width * std::abs(dot(normal, axis));
}

bool separated_along(const OrientedBox & a, const OrientedBox & b, Vec2 axis)
{
  const Vec2 d{b.center_x - a.center_x, b.center_y - a.center_y};
  return std::abs(dot(d, axis)) > projected_radius(a, axis) + projected_radius(b, axis) + kTouchSlack;
}

void require_aligned(const Trajectory & a, const Trajectory & b)
{
  if (a.start_step != b.start_step || a.size() != b.size()) {
    throw std::invalid_argument(
      "trajectories cover different step ranges: [" + std::to_string(a.start_step) + ", " +
      std::to_string(a.end_step()) + ") vs [" + std::to_string(b.start_step) + ", " +
      std::to_string(b.end_step()) + ")");
  }
}

std::vector<double> cumulative_arc(const std::vector<PathPoint> & pts)
{
  std::vector<double> arc(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    arc[i] = arc[i - 1] + distance(pts[i - 1], pts[i]);
  }
  return arc;
}

// Global step at which a polyline traversal reaches the given arc length.
int step_at_arc(const Trajectory & traj, const std::vector<double> & arc, double s)
{
  for (std::size_t j = 0; j < arc.size(); ++j) {
    if (arc[j] >= s - 1e-9) {
      return traj.start_step + static_cast<int>(j);
    }
  }
  return traj.end_step() - 1;
}

}  // namespace

std::array<PathPoint, 4> OrientedBox::corners() const
{
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  auto corner = [&](double lx, double ly) {
    return PathPoint{center_x + c * lx - s * ly, center_y + s * lx + c * ly};
  };
  // Counter-clockwise.
  return {corner(hl, -hw), corner(hl, hw), corner(-hl, hw), corner(-hl, -hw)};
}

OrientedBox box_at(const AgentState & state, const BoxDims & dims)
{
  return {state.x, state.y, state.heading, dims.length, dims.width};
}

bool boxes_overlap(const OrientedBox & a, const OrientedBox & b)
{
  for (const OrientedBox * box : {&a, &b}) {
    const Vec2 along{std::cos(box->heading), std::sin(box->heading)};
    const Vec2 normal{-along.y, along.x};
    if (separated_along(a, b, along) || separated_along(a, b, normal)) {
      return false;
    }
  }
  return true;
}

std::vector<PathPoint> overlap_polygon(const OrientedBox & a, const OrientedBox & b)
{
  const auto a_corners = a.corners();
  const auto b_corners = b.corners();
  std::vector<PathPoint> poly(a_corners.begin(), a_corners.end());

  // Sutherland-Hodgman: clip A by each (counter-clockwise) edge of B.
  for (std::size_t e = 0; e < 4 && !poly.empty(); ++e) {
    const PathPoint & e0 = b_corners[e];
    const PathPoint & e1 = b_corners[(e + 1) % 4];
    const Vec2 edge{e1.x - e0.x, e1.y - e0.y};
    auto inside = [&](const PathPoint & p) {
      return cross(edge, Vec2{p.x - e0.x, p.y - e0.y}) >= 0.0;
    };
    std::vector<PathPoint> clipped;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const PathPoint & cur = poly[i];
      const PathPoint & nxt = poly[(i + 1) % poly.size()];
      const bool cur_in = inside(cur);
      const bool nxt_in = inside(nxt);
      if (cur_in) {
        clipped.push_back(cur);
      }
      if (cur_in != nxt_in) {
        const double c0 = cross(edge, Vec2{cur.x - e0.x, cur.y - e0.y});
        const double c1 = cross(edge, Vec2{nxt.x - e0.x, nxt.y - e0.y});
        const double t = c0 / (c0 - c1);
        clipped.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
      }
    }
    poly = std::move(clipped);
  }
  return poly;
}

std::optional<int> first_collision_step(
  const Trajectory & traj_a, const Trajectory & traj_b, const BoxDims & dims_a,
  const BoxDims & dims_b, int from_step)
{
  require_aligned(traj_a, traj_b);
  if (from_step < traj_a.start_step || from_step > traj_a.end_step()) {
    throw std::invalid_argument("from_step " + std::to_string(from_step) + " outside trajectory");
  }
  for (int k = from_step; k < traj_a.end_step(); ++k) {
    if (boxes_overlap(box_at(traj_a.at(k), dims_a), box_at(traj_b.at(k), dims_b))) {
      return k;
    }
  }
  return std::nullopt;
}

const char * to_string(CrossKind kind)
{
  switch (kind) {
    case CrossKind::kPathCrossing:
      return "path-crossing";
    case CrossKind::kSameLaneCollision:
      return "same-lane-collision";
  }
  return "unknown";
}

std::optional<PathPoint> segment_intersection(
  const PathPoint & p0, const PathPoint & p1, const PathPoint & q0, const PathPoint & q1)
{
  const Vec2 r{p1.x - p0.x, p1.y - p0.y};
  const Vec2 s{q1.x - q0.x, q1.y - q0.y};
  const double denom = cross(r, s);
  const double scale = std::hypot(r.x, r.y) * std::hypot(s.x, s.y);
  if (scale <= 0.0 || std::abs(denom) <= 1e-9 * scale) {
    return std::nullopt;
  }
  const Vec2 qp{q0.x - p0.x, q0.y - p0.y};
  const double t = cross(qp, s) / denom;
  const double u = cross(qp, r) / denom;
  constexpr double eps = 1e-12;
  if (t < -eps || t > 1.0 + eps || u < -eps || u > 1.0 + eps) {
    return std::nullopt;
  }
  return PathPoint{p0.x + t * r.x, p0.y + t * r.y};
}

std::optional<int> arrival_step(
  const Trajectory & traj, const PathPoint & point, double lateral_tolerance)
{
  for (int k = traj.start_step; k < traj.end_step(); ++k) {
    const AgentState & st = traj.at(k);
    const Vec2 dir{std::cos(st.heading), std::sin(st.heading)};
    const Vec2 rel{point.x - st.x, point.y - st.y};
    if (dot(rel, dir) <= 1e-9 && std::abs(cross(dir, rel)) <= lateral_tolerance) {
      return k;
    }
  }
  return std::nullopt;
}

std::optional<CrossPoint> cross_point(
  const Trajectory & traj_a, const Trajectory & traj_b, const BoxDims & dims_a,
  const BoxDims & dims_b)
{
  if (traj_a.empty() || traj_b.empty()) {
    throw std::invalid_argument("cross_point requires nonempty trajectories");
  }
  const auto pa = traj_a.positions();
  const auto pb = traj_b.positions();
  const auto arc_a = cumulative_arc(pa);
  const auto arc_b = cumulative_arc(pb);

  // (s_a + s_b, min(s_a, s_b), x, y) orders candidates independently of
  // argument order.
  std::optional<std::tuple<double, double, double, double>> best_key;
  CrossPoint best;
  for (std::size_t i = 0; i + 1 < pa.size(); ++i) {
    if (distance(pa[i], pa[i + 1]) < kMinSegment) {
      continue;
    }
    for (std::size_t j = 0; j + 1 < pb.size(); ++j) {
      if (distance(pb[j], pb[j + 1]) < kMinSegment) {
        continue;
      }
      const auto hit = segment_intersection(pa[i], pa[i + 1], pb[j], pb[j + 1]);
      if (!hit) {
        continue;
      }
      const double s_a = arc_a[i] + distance(pa[i], *hit);
      const double s_b = arc_b[j] + distance(pb[j], *hit);
      const auto key = std::make_tuple(s_a + s_b, std::min(s_a, s_b), hit->x, hit->y);
      if (best_key && !(key < *best_key)) {
        continue;
      }
      best_key = key;
      best.point = *hit;
      best.kind = CrossKind::kPathCrossing;
      best.index_a = step_at_arc(traj_a, arc_a, s_a);
      best.index_b = step_at_arc(traj_b, arc_b, s_b);
      best.reaches_a = true;
      best.reaches_b = true;
      const double ha = std::atan2(pa[i + 1].y - pa[i].y, pa[i + 1].x - pa[i].x);
      const double hb = std::atan2(pb[j + 1].y - pb[j].y, pb[j + 1].x - pb[j].x);
      best.angle = heading_difference(ha, hb);
    }
  }
  if (best_key) {
    return best;
  }

  const auto step = first_collision_step(traj_a, traj_b, dims_a, dims_b, traj_a.start_step);
  if (!step) {
    return std::nullopt;
  }
  const AgentState & sa = traj_a.at(*step);
  const AgentState & sb = traj_b.at(*step);
  CrossPoint out;
  out.kind = CrossKind::kSameLaneCollision;
  out.point = {0.5 * (sa.x + sb.x), 0.5 * (sa.y + sb.y)};
  out.angle = heading_difference(sa.heading, sb.heading);
  // Each center lies within half the summed footprint extents of the
  // midpoint at the collision step.
  const double tolerance = 0.5 * (std::max(dims_a.length, dims_a.width) +
                                  std::max(dims_b.length, dims_b.width));
  const auto arrive_a = arrival_step(traj_a, out.point, tolerance);
  const auto arrive_b = arrival_step(traj_b, out.point, tolerance);
  out.reaches_a = arrive_a.has_value();
  out.reaches_b = arrive_b.has_value();
  out.index_a = arrive_a.value_or(traj_a.end_step() - 1);
  out.index_b = arrive_b.value_or(traj_b.end_step() - 1);
  return out;
}

}  // namespace relsim
