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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "relsim/cli.hpp"
#include "relsim/generators.hpp"
#include "relsim/metrics.hpp"
#include "relsim/relation.hpp"
#include "relsim/rng.hpp"
#include "relsim/trajectory.hpp"

namespace relsim
{
namespace
{

namespace fs = std::filesystem;

struct Verdict
{
  bool pass = true;
  std::string detail;
};

std::string fmt(const char * format, ...) __attribute__((format(printf, 1, 2)));

std::string fmt(const char * format, ...)
{
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EpisodeResult simulate(
  const Scenario & s, const PlannerSpec & spec, const ResolutionPolicy & policy,
  std::uint64_t seed, OverrideRegistry overrides = {})
{
  auto planner = make_planner(spec);
  EngineOptions o;
  o.policy = policy;
  o.overrides = std::move(overrides);
  return run_episode(s, *planner, o, seed);
}

// Agents whose committed trajectory is not bitwise their log.
std::set<std::string> modified_agents(const EpisodeResult & r, const Scenario & s)
{
  std::set<std::string> out;
  for (const auto & a : s.agents) {
    if (r.final_state.committed.at(a.id).states != a.reference_future) {
      out.insert(a.id);
    }
  }
  return out;
}

Verdict replay_fixed_point()
{
  const auto t0 = std::chrono::steady_clock::now();
  double worst_ade = 0.0, worst_fde = 0.0, worst_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = sample_collision_free_scene(seed);
    const auto r = simulate(s, {}, {Policy::kFull, EgoMode::kCooperative}, seed);
    const auto m = compute_metrics(r, s);
    worst_ade = std::max(worst_ade, m.ade);
    worst_fde = std::max(worst_fde, m.fde);
    worst_ratio = std::max(worst_ratio, m.relevant_ratio);
  }
  const double elapsed = seconds_since(t0);
  Verdict v;
  v.pass = worst_ade == 0.0 && worst_fde == 0.0 && worst_ratio == 0.0 && elapsed < 5.0;
  v.detail = fmt(
    "50 collision-free scenes, max ade=%g fde=%g relevant_ratio=%g (want exactly 0), %.2f s (< 5 s)",
    worst_ade, worst_fde, worst_ratio, elapsed);
  return v;
}

Verdict rear_collision_ordering()
{
  const auto t0 = std::chrono::steady_clock::now();
  PlannerSpec spec;
  spec.kind = PlannerKind::kSlowdown;
  spec.decel = 1.5;
  const Policy policies[] = {Policy::kM0, Policy::kM1, Policy::kFull};
  int rear_scenes[3] = {0, 0, 0};
  double progress[3] = {0.0, 0.0, 0.0};
  const int n = 200;
  for (std::uint64_t seed = 0; seed < n; ++seed) {
    const auto s = sample_car_following_scene(seed);
    for (int p = 0; p < 3; ++p) {
      const auto r = simulate(s, spec, {policies[p], EgoMode::kAuthoritative}, seed);
      bool rear = false;
      for (const auto & c : classify_collisions(r.final_state.committed, s)) {
        rear |= c.cls == CollisionClass::kRear;
      }
      rear_scenes[p] += rear ? 1 : 0;
      progress[p] += compute_metrics(r, s).progress / n;
    }
  }
  const double elapsed = seconds_since(t0);
  const double m0 = 100.0 * rear_scenes[0] / n;
  const double m1 = 100.0 * rear_scenes[1] / n;
  const double full = 100.0 * rear_scenes[2] / n;
  Verdict v;
  v.pass = m0 >= 50.0 && full <= 2.0 && m1 <= 2.0 && progress[1] < progress[2] &&
           progress[2] < progress[0] && elapsed < 60.0;
  v.detail = fmt(
    "200 car-following scenes, rear-collision scenes m0=%.1f%% (>= 50) full=%.1f%% (<= 2) "
    "m1=%.1f%% (<= 2); progress m1=%.3f < full=%.3f < m0=%.3f; %.2f s (< 60 s)",
    m0, full, m1, progress[1], progress[2], progress[0], elapsed);
  return v;
}

Verdict cascade_soundness()
{
  PlannerSpec spec;
  spec.kind = PlannerKind::kSlowdown;
  spec.decel = 1.5;
  int residual = 0, overshoot_scenes = 0, over_budget = 0, wrong_relevant = 0, errors = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = sample_chain_scene(seed);
    const int n = static_cast<int>(s.agents.size());
    EpisodeResult r;
    try {
      r = simulate(s, spec, {Policy::kFull, EgoMode::kAuthoritative}, seed);
    } catch (const std::exception & e) {
      std::cerr << "chain seed " << seed << ": " << e.what() << "\n";
      ++errors;
      continue;
    }
    std::set<std::string> overshooting;
    for (const auto & e : r.final_state.events) {
      if (e.kind != "overshoot") {
        continue;
      }
      if (e.payload.contains("agent")) {
        overshooting.insert(e.payload["agent"].get<std::string>());
      }
      if (e.payload.contains("agents")) {
        for (const auto & id : e.payload["agents"]) {
          overshooting.insert(id.get<std::string>());
        }
      }
    }
    overshoot_scenes += overshooting.empty() ? 0 : 1;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const auto & a = s.agents[static_cast<std::size_t>(i)];
        const auto & b = s.agents[static_cast<std::size_t>(j)];
        if (overshooting.count(a.id) || overshooting.count(b.id)) {
          continue;
        }
        const auto hit = oracle::scan_first_collision(
          r.final_state.committed.at(a.id), r.final_state.committed.at(b.id), a.dims(), b.dims(),
          0);
        residual += hit ? 1 : 0;
      }
    }
    for (int count : r.final_state.resolutions) {
      over_budget += count > 4 * n ? 1 : 0;
    }
    // Downstream followers: every agent behind the ego along its heading.
    const auto ego = s.ego().current();
    std::set<std::string> followers;
    for (const auto & a : s.agents) {
      const auto now = a.current();
      const double along =
        (now.x - ego.x) * std::cos(ego.heading) + (now.y - ego.y) * std::sin(ego.heading);
      if (a.id != s.ego_id && along < 0.0) {
        followers.insert(a.id);
      }
    }
    wrong_relevant += r.final_state.relevant == followers ? 0 : 1;
  }
  Verdict v;
  v.pass = errors == 0 && residual == 0 && overshoot_scenes < 5 && over_budget == 0 &&
           wrong_relevant == 0;
  v.detail = fmt(
    "100 chain scenes, residual pairs=%d (0), overshoot scenes=%d (< 5), resolve_all calls over "
    "4N=%d (0), relevant != followers in %d scenes (0), errors=%d",
    residual, overshoot_scenes, over_budget, wrong_relevant, errors);
  return v;
}

// Step at which the agent's center has covered `arc` of its sampled path.
int arrival_index(const AgentRecord & r, double arc)
{
  const auto pts = reference_path_points(r);
  double travelled = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    travelled += distance(pts[k - 1], pts[k]);
    if (travelled >= arc - 1e-9) {
      return static_cast<int>(k) - 1;
    }
  }
  return static_cast<int>(pts.size());
}

Verdict relation_oracle()
{
  int agree = 0, ties = 0, no_hit = 0;
  const int n = 500;
  for (std::uint64_t seed = 0; seed < n; ++seed) {
    const auto s = sample_crossing_scene(seed);
    const auto & a = s.agent("A");
    const auto & b = s.agent("B");
    const auto hits =
      oracle::polyline_intersections(reference_path_points(a), reference_path_points(b));
    if (hits.empty()) {
      ++no_hit;
      continue;
    }
    const int ka = arrival_index(a, hits[0].arc_a);
    const int kb = arrival_index(b, hits[0].arc_b);
    if (ka == kb) {
      ++ties;
      continue;
    }
    const auto label = infer_relation(
      a.reference_trajectory(), b.reference_trajectory(), "A", "B", a.dims(), b.dims(), {});
    agree += label.influencer == (ka < kb ? "A" : "B") ? 1 : 0;
  }
  Verdict v;
  v.pass = agree == n;
  v.detail = fmt(
    "500 crossing scenes, influencer = earlier arrival in %d/%d (100%%), independent ties=%d, "
    "no intersection=%d",
    agree, n, ties, no_hit);
  return v;
}

Verdict relation_manipulation()
{
  Rng rng(5);
  int accepted = 0, draws = 0, swapped = 0, untouched = 0;
  while (accepted < 20 && draws < 400) {
    ++draws;
    CrossingParams p;
    p.angle = rng.uniform(kPi / 4, 3 * kPi / 4);
    p.arrival_offset = rng.uniform(-0.4, 0.4);
    p.speed_a = rng.uniform(8.0, 12.0);
    p.speed_b = rng.uniform(8.0, 12.0);
    p.ego = "A";
    const auto s = gen_crossing(p, static_cast<std::uint64_t>(draws));
    const auto & a = s.agent("A");
    const auto & b = s.agent("B");
    // Only scenes whose logs collide carry a relation to manipulate.
    if (!oracle::scan_first_collision(
          a.reference_trajectory(), b.reference_trajectory(), a.dims(), b.dims(), 0)) {
      continue;
    }
    ++accepted;
    const ResolutionPolicy policy{Policy::kFull, EgoMode::kCooperative};
    const auto base = simulate(s, {}, policy, 0);
    const auto base_modified = modified_agents(base, s);
    if (base_modified.size() != 1) {
      continue;
    }
    const std::string reactor = *base_modified.begin();
    const std::string influencer = reactor == "A" ? "B" : "A";
    OverrideRegistry reversed;
    reversed.add(reactor + ">" + influencer);
    const auto forced = simulate(s, {}, policy, 0, reversed);
    swapped += modified_agents(forced, s) == std::set<std::string>{influencer} ? 1 : 0;
    untouched += forced.final_state.committed.at(reactor).states ==
                     s.agent(reactor).reference_future &&
                   base.final_state.committed.at(influencer).states ==
                     s.agent(influencer).reference_future
                   ? 1
                   : 0;
  }
  Verdict v;
  v.pass = accepted == 20 && swapped == 20 && untouched == 20;
  v.detail = fmt(
    "%d colliding crossing scenes (20, from %d draws), modified agent swapped in %d, other agent "
    "bitwise equal to its log in %d",
    accepted, draws, swapped, untouched);
  return v;
}

OrientedBox moved(const OrientedBox & b, double dx, double dy, double angle)
{
  OrientedBox out = b;
  out.center_x = std::cos(angle) * b.center_x - std::sin(angle) * b.center_y + dx;
  out.center_y = std::sin(angle) * b.center_x + std::cos(angle) * b.center_y + dy;
  out.heading = normalize_angle(b.heading + angle);
  return out;
}

Verdict geometry_equivalence()
{
  Rng rng(6);
  auto random_box = [&] {
    OrientedBox b;
    b.center_x = rng.uniform(-5.0, 5.0);
    b.center_y = rng.uniform(-5.0, 5.0);
    b.heading = rng.uniform(-kPi, kPi);
    b.length = rng.uniform(1.0, 6.0);
    b.width = rng.uniform(0.5, 2.5);
    return b;
  };
  int compared = 0, banded = 0, disagree = 0, asymmetric = 0, variant = 0, overlapping = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_box();
    const auto b = random_box();
    const bool got = boxes_overlap(a, b);
    overlapping += got ? 1 : 0;
    asymmetric += got != boxes_overlap(b, a) ? 1 : 0;
    const double dx = rng.uniform(-100.0, 100.0);
    const double dy = rng.uniform(-100.0, 100.0);
    const double rot = rng.uniform(-kPi, kPi);
    variant += got != boxes_overlap(moved(a, dx, dy, rot), moved(b, dx, dy, rot)) ? 1 : 0;
    const auto ra = oracle::rect_of(a);
    const auto rb = oracle::rect_of(b);
    if (std::abs(oracle::boundary_margin(ra, rb)) <= 0.02) {
      ++banded;
      continue;
    }
    ++compared;
    disagree += got != oracle::grid_overlap(ra, rb, 0.01) ? 1 : 0;
  }
  Verdict v;
  v.pass = disagree == 0 && asymmetric == 0 && variant == 0;
  v.detail = fmt(
    "1000 random pairs (%d overlapping), grid disagreements=%d of %d outside the 2 cm band "
    "(%d inside), asymmetric=%d, transform-variant=%d",
    overlapping, disagree, compared, banded, asymmetric, variant);
  return v;
}

Verdict rollout_kinematics()
{
  Rng rng(7);
  const KinematicLimits limits;
  RolloutOptions opts;
  opts.step_seconds = 0.5;
  int feasible = 0, bad_stop = 0, bad_distance = 0, negative = 0;
  double worst_rel = 0.0, worst_gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double v0 = rng.uniform(2.0, 20.0);
    const double goal = rng.uniform(1.0, 150.0);
    const AgentState now{0.0, 0.0, 0.0, v0};
    const std::vector<PathPoint> path{{0.0, 0.0}, {goal + 200.0, 0.0}};
    const auto r = goal_conditioned_rollout(now, path, {goal, 0.0}, 240, limits, opts);
    for (const auto & st : r.trajectory.states) {
      negative += st.speed < 0.0 ? 1 : 0;
    }
    if (r.regime != BrakeRegime::kHard) {
      ++feasible;
      const auto & end = r.trajectory.states.back();
      const double gap = std::abs(end.x - goal);
      worst_gap = std::max(worst_gap, gap);
      bad_stop += gap <= 0.5 && end.speed < 0.1 ? 0 : 1;
    }
    const Polyline lane({{0.0, 0.0}, {500.0, 0.0}});
    const auto stop = immediate_stop_rollout(now, lane, 240, limits, opts);
    for (const auto & st : stop.trajectory.states) {
      negative += st.speed < 0.0 ? 1 : 0;
    }
    const double want = oracle::stopping_distance(v0, limits.hard_decel);
    const double rel = std::abs(stop.trajectory.states.back().x - want) / want;
    worst_rel = std::max(worst_rel, rel);
    bad_distance += rel <= 0.02 ? 0 : 1;
  }
  Verdict v;
  v.pass = bad_stop == 0 && bad_distance == 0 && negative == 0 && feasible > 0;
  v.detail = fmt(
    "100 (v0, goal) cases, %d feasible: worst goal gap %.3f m (<= 0.5) with end speed < 0.1, "
    "failures=%d; stop distance vs v^2/(2a) worst %.3f%% (<= 2%%), failures=%d; negative "
    "speeds=%d",
    feasible, worst_gap, bad_stop, 100.0 * worst_rel, bad_distance, negative);
  return v;
}

Verdict batch_determinism()
{
  const fs::path root = fs::temp_directory_path() / "relsim_acceptance_batch";
  fs::remove_all(root);
  auto batch = [&](const std::string & workers, const std::string & name) {
    const std::string out = (root / name).string();
    const std::vector<std::string> args{
      "relsim", "batch", "--sweep", "chain", "--count", "40", "--seed", "11", "--planner",
      "perturbed", "--workers", workers, "--out", out};
    std::vector<const char *> argv;
    for (const auto & a : args) {
      argv.push_back(a.c_str());
    }
    std::ostringstream sink;
    return cli::run(static_cast<int>(argv.size()), argv.data(), sink, std::cerr);
  };
  auto slurp = [&](const std::string & name, const char * file) {
    std::ifstream f(root / name / file, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  };
  const int codes = batch("1", "w1") + batch("4", "w4") + batch("1", "rerun");
  int identical = 0;
  for (const char * file : {"report.csv", "report.json", "episodes.csv"}) {
    const auto ref = slurp("w1", file);
    identical += !ref.empty() && ref == slurp("w4", file) && ref == slurp("rerun", file) ? 1 : 0;
  }
  fs::remove_all(root);
  Verdict v;
  v.pass = codes == 0 && identical == 3;
  v.detail = fmt(
    "40-scene chain sweep x 4 policies, workers 1 vs 4 vs rerun: %d/3 report files byte-identical",
    identical);
  return v;
}

}  // namespace
}  // namespace relsim

int main()
{
  using relsim::Verdict;
  const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria{
    {"replay fixed point", relsim::replay_fixed_point},
    {"rear-collision ordering", relsim::rear_collision_ordering},
    {"cascade soundness", relsim::cascade_soundness},
    {"relation oracle", relsim::relation_oracle},
    {"relation manipulation", relsim::relation_manipulation},
    {"geometry oracle equivalence", relsim::geometry_equivalence},
    {"rollout kinematics", relsim::rollout_kinematics},
    {"batch determinism", relsim::batch_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception & e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::cout << "AC" << i + 1 << " " << (v.pass ? "PASS" : "FAIL") << " " << criteria[i].first
              << ": " << v.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
