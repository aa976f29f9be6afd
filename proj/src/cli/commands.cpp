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

#include "relsim/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "relsim/generators.hpp"
#include "relsim/trace.hpp"

namespace relsim::cli
{

namespace fs = std::filesystem;

namespace
{

struct GenOptions
{
  std::string kind;
  std::optional<double> gap;
  std::optional<double> lead_speed;
  std::optional<double> follow_speed;
  std::optional<std::string> ego;
  std::optional<double> angle_deg;
  std::optional<double> offset;
  std::optional<double> speed_a;
  std::optional<double> speed_b;
  std::optional<int> agents;
  std::optional<double> speed;
};

void add_generator_flags(CLI::App & cmd, GenOptions & g)
{
  cmd.add_option("--gap", g.gap, "car-following / chain: center gap [m]");
  cmd.add_option("--lead-speed", g.lead_speed, "car-following: lead speed [m/s]");
  cmd.add_option("--follow-speed", g.follow_speed, "car-following: follower speed [m/s]");
  cmd.add_option("--ego", g.ego, "car-following: lead|follow; crossing: A|B");
  cmd.add_option("--angle", g.angle_deg, "crossing: heading of B relative to A [deg]");
  cmd.add_option("--offset", g.offset, "crossing: B arrives this much later than A [s]");
  cmd.add_option("--speed-a", g.speed_a, "crossing: speed of A [m/s]");
  cmd.add_option("--speed-b", g.speed_b, "crossing: speed of B [m/s]");
  cmd.add_option("--agents", g.agents, "chain: number of agents including the ego");
  cmd.add_option("--speed", g.speed, "chain: common speed [m/s]");
}

Scenario generate(const GenOptions & g, std::uint64_t seed)
{
  try {
    if (g.kind == "car-following") {
      CarFollowingParams p;
      p.gap = g.gap.value_or(p.gap);
      p.lead_speed = g.lead_speed.value_or(p.lead_speed);
      p.follow_speed = g.follow_speed.value_or(p.follow_speed);
      if (g.ego) {
        if (*g.ego != "lead" && *g.ego != "follow") {
          throw UsageError("--ego must be lead or follow for car-following");
        }
        p.ego = *g.ego == "lead" ? EgoRole::kLeader : EgoRole::kFollower;
      }
      return gen_car_following(p, seed);
    }
    if (g.kind == "crossing") {
      CrossingParams p;
      if (g.angle_deg) {
        p.angle = *g.angle_deg * kPi / 180.0;
      }
      p.arrival_offset = g.offset.value_or(p.arrival_offset);
      p.speed_a = g.speed_a.value_or(p.speed_a);
      p.speed_b = g.speed_b.value_or(p.speed_b);
      p.ego = g.ego.value_or(p.ego);
      if (p.ego != "A" && p.ego != "B") {
        throw UsageError("--ego must be A or B for crossing");
      }
      return gen_crossing(p, seed);
    }
    if (g.kind == "chain") {
      ChainParams p;
      const int agents = g.agents.value_or(3);
      if (agents < 2) {
        throw UsageError("--agents must be at least 2");
      }
      p.gaps.assign(static_cast<std::size_t>(agents - 1), g.gap.value_or(10.0));
      p.speed = g.speed.value_or(p.speed);
      return gen_chain(p, seed);
    }
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown generator '" + g.kind + "' (car-following, crossing, chain)");
}

Scenario sample(const std::string & kind, std::uint64_t seed)
{
  if (kind == "car-following") {
    return sample_car_following_scene(seed);
  }
  if (kind == "crossing") {
    return sample_crossing_scene(seed);
  }
  if (kind == "chain") {
    return sample_chain_scene(seed);
  }
  if (kind == "collision-free") {
    return sample_collision_free_scene(seed);
  }
  throw UsageError(
    "unknown sweep '" + kind + "' (car-following, crossing, chain, collision-free)");
}

struct PlannerFlags
{
  std::string kind = "replay";
  double decel = 1.5;
  std::optional<double> speed_scale;
  double lateral_sigma = 0.3;
};

void add_planner_flags(CLI::App & cmd, PlannerFlags & p)
{
  cmd.add_option("--planner", p.kind, "replay | perturbed | slowdown")->capture_default_str();
  cmd.add_option("--decel", p.decel, "slowdown deceleration [m/s^2]")->capture_default_str();
  cmd.add_option("--speed-scale", p.speed_scale, "perturbed: fixed speed scale");
  cmd.add_option("--lateral-sigma", p.lateral_sigma, "perturbed: lateral noise std [m]")
    ->capture_default_str();
}

PlannerSpec planner_spec(const PlannerFlags & flags)
{
  try {
    PlannerSpec spec;
    spec.kind = parse_planner_kind(flags.kind);
    spec.decel = flags.decel;
    spec.speed_scale = flags.speed_scale;
    spec.lateral_sigma = flags.lateral_sigma;
    spec.validate();
    return spec;
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
}

std::string default_out_dir()
{
  const char * env = std::getenv("RELSIM_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : "out";
}

void write_file(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot write " + path.string());
  }
  f << text;
  if (!f) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

std::string fixed(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// ---------------------------------------------------------------------------

struct RunFlags
{
  std::optional<std::string> scenario;
  GenOptions gen;
  PlannerFlags planner;
  std::string policy = "full";
  std::string ego_mode = "cooperative";
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  std::string out;
};

int cmd_run(const RunFlags & flags, std::ostream & out)
{
  if (flags.scenario.has_value() == !flags.gen.kind.empty()) {
    throw UsageError("give exactly one of --scenario and --gen");
  }
  const PlannerSpec spec = planner_spec(flags.planner);
  EngineOptions options;
  try {
    options.policy.policy = parse_policy(flags.policy);
    options.policy.ego_mode = parse_ego_mode(flags.ego_mode);
    for (const auto & o : flags.overrides) {
      options.overrides.add(o);
    }
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
  const Scenario scenario =
    flags.scenario ? load_scenario_file(*flags.scenario) : generate(flags.gen, flags.seed);
  for (const auto & label : options.overrides.labels()) {
    for (const auto & id : {label.influencer, label.reactor}) {
      if (!scenario.has_agent(id)) {
        throw UsageError("--force-relation names unknown agent '" + id + "'");
      }
    }
  }

  auto planner = make_planner(spec);
  const EpisodeResult result = run_episode(scenario, *planner, options, flags.seed);
  const EpisodeMetrics metrics = compute_metrics(result, scenario);

  nlohmann::json collisions = nlohmann::json::array();
  for (const auto & c : classify_collisions(result.final_state.committed, scenario)) {
    collisions.push_back({{"striker", c.striker},
                          {"struck", c.struck},
                          {"step", c.step},
                          {"class", to_string(c.cls)},
                          {"contact", {c.contact.x, c.contact.y}}});
  }
  nlohmann::json metrics_doc{
    {"scenario_id", result.scenario_id}, {"planner", result.planner},
    {"policy", result.policy.label()},   {"seed", result.seed},
    {"metrics", metrics_json(metrics)},  {"collisions", collisions},
    {"relevant", result.final_state.relevant},
  };

  const fs::path dir = flags.out.empty() ? default_out_dir() : flags.out;
  write_file(dir / "trace.json", trace_json(result, scenario).dump(1) + "\n");
  write_file(dir / "metrics.json", metrics_doc.dump(2) + "\n");
  out << scenario.id << " " << result.policy.label() << " " << result.planner
      << ": relevant_ratio=" << fixed(metrics.relevant_ratio) << " ade=" << fixed(metrics.ade)
      << " fde=" << fixed(metrics.fde) << " collisions=" << metrics.residual_collision_pairs
      << " progress=" << fixed(metrics.progress) << "\n";
  out << "wrote " << (dir / "trace.json").string() << " and " << (dir / "metrics.json").string()
      << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BatchFlags
{
  std::optional<std::string> dir;
  std::optional<std::string> sweep;
  int count = 100;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string policies = "m0,m1,full:authoritative,full:cooperative";
  PlannerFlags planner;
  std::string out;
};

std::vector<ResolutionPolicy> parse_policy_list(const std::string & text)
{
  std::vector<ResolutionPolicy> out;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) {
        out.push_back(parse_resolution_policy(item));
      }
    }
  } catch (const std::invalid_argument & e) {
    throw UsageError(e.what());
  }
  if (out.empty()) {
    throw UsageError("--policies is empty");
  }
  return out;
}

std::vector<Scenario> load_dir(const fs::path & dir)
{
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto & entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) {
    throw std::runtime_error("no scenario files (*.json) in " + dir.string());
  }
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  for (const auto & f : files) {
    try {
      out.push_back(load_scenario_file(f));
    } catch (const std::exception & e) {
      throw std::runtime_error(f.string() + ": " + e.what());
    }
  }
  return out;
}

int cmd_batch(const BatchFlags & flags, std::ostream & out)
{
  if (flags.dir.has_value() == flags.sweep.has_value()) {
    throw UsageError("give exactly one of --dir and --sweep");
  }
  if (flags.workers < 1) {
    throw UsageError("--workers must be at least 1");
  }
  if (flags.count < 1) {
    throw UsageError("--count must be at least 1");
  }
  const PlannerSpec spec = planner_spec(flags.planner);
  const auto policies = parse_policy_list(flags.policies);

  std::vector<Scenario> scenarios;
  if (flags.dir) {
    scenarios = load_dir(*flags.dir);
  } else {
    for (int i = 0; i < flags.count; ++i) {
      scenarios.push_back(sample(*flags.sweep, flags.seed + static_cast<std::uint64_t>(i)));
    }
  }

  const BatchOutput result = run_batch(scenarios, policies, spec, flags.seed, flags.workers);
  const fs::path dir = flags.out.empty() ? default_out_dir() : flags.out;
  write_file(dir / "report.csv", report_csv(result.rows));
  write_file(dir / "report.json", report_json(result.rows));
  write_file(dir / "episodes.csv", episodes_csv(result.episodes));
  out << report_csv(result.rows);
  out << "wrote " << (dir / "report.csv").string() << ", " << (dir / "report.json").string()
      << ", " << (dir / "episodes.csv").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_render(const std::string & trace_path, const std::string & out_dir, std::ostream & out)
{
  std::ifstream f(trace_path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot read " + trace_path);
  }
  nlohmann::json trace;
  try {
    trace = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception & e) {
    throw TraceError(std::string("malformed trace: ") + e.what());
  }
  const auto frames = render_frames(trace);
  const fs::path dir = out_dir.empty() ? fs::path(default_out_dir()) / "frames" : fs::path(out_dir);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "step_%03zu.svg", i);
    write_file(dir / name, frames[i]);
  }
  out << "wrote " << frames.size() << " frames to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_generate(const GenOptions & gen, std::uint64_t seed, const std::string & out_path,
                 std::ostream & out)
{
  const Scenario scenario = generate(gen, seed);
  if (out_path.empty()) {
    out << save_scenario(scenario);
  } else {
    write_file(out_path, save_scenario(scenario));
    out << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

BatchOutput run_batch(
  const std::vector<Scenario> & scenarios, const std::vector<ResolutionPolicy> & policies,
  const PlannerSpec & planner, std::uint64_t seed, int workers)
{
  const std::size_t tasks = scenarios.size() * policies.size();
  std::vector<EpisodeMetrics> metrics(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      const std::size_t si = t / policies.size();
      const std::size_t pi = t % policies.size();
      try {
        auto p = make_planner(planner);
        EngineOptions options;
        options.policy = policies[pi];
        const auto result =
          run_episode(scenarios[si], *p, options, seed + static_cast<std::uint64_t>(si));
        metrics[t] = compute_metrics(result, scenarios[si]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(tasks, 1))));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto & th : pool) {
    th.join();
  }
  for (std::size_t t = 0; t < tasks; ++t) {
    if (errors[t]) {
      try {
        std::rethrow_exception(errors[t]);
      } catch (const std::exception & e) {
        throw std::runtime_error(
          scenarios[t / policies.size()].id + " (" + policies[t % policies.size()].label() +
          "): " + e.what());
      }
    }
  }

  BatchOutput out;
  for (std::size_t pi = 0; pi < policies.size(); ++pi) {
    std::vector<EpisodeMetrics> per_policy;
    for (std::size_t si = 0; si < scenarios.size(); ++si) {
      per_policy.push_back(metrics[si * policies.size() + pi]);
    }
    out.rows.push_back(aggregate(per_policy, policies[pi].label()));
  }
  for (std::size_t t = 0; t < tasks; ++t) {
    out.episodes.push_back(
      {scenarios[t / policies.size()].id, policies[t % policies.size()].label(), metrics[t]});
  }
  return out;
}

std::string episodes_csv(const std::vector<EpisodeRow> & episodes)
{
  std::ostringstream out;
  out << "scenario_id,policy,relevant_ratio,ade,fde,front,side,rear,progress,"
         "relevant_ade,relevant_fde,residual_collision_pairs\n";
  for (const auto & e : episodes) {
    const auto & m = e.metrics;
    out << e.scenario_id << ',' << e.policy;
    for (double v : {m.relevant_ratio, m.ade, m.fde, m.front_rate, m.side_rate, m.rear_rate,
                     m.progress, m.relevant_ade, m.relevant_fde}) {
      out << ',' << fixed(v);
    }
    out << ',' << m.residual_collision_pairs << '\n';
  }
  return out.str();
}

int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Closed-loop interactive traffic simulator with relation-aware conflict resolution",
               "relsim"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto * run_cmd = app.add_subcommand("run", "simulate one episode");
  auto * scenario_opt =
    run_cmd->add_option("--scenario", run_flags.scenario, "scenario JSON file");
  auto * gen_opt = run_cmd->add_option(
    "--gen", run_flags.gen.kind, "synthetic scenario: car-following | crossing | chain");
  scenario_opt->excludes(gen_opt);
  add_generator_flags(*run_cmd, run_flags.gen);
  add_planner_flags(*run_cmd, run_flags.planner);
  run_cmd->add_option("--policy", run_flags.policy, "m0 | m1 | full")->capture_default_str();
  run_cmd->add_option("--ego-mode", run_flags.ego_mode, "authoritative | cooperative")
    ->capture_default_str();
  run_cmd->add_option("--seed", run_flags.seed, "episode seed")->capture_default_str();
  run_cmd->add_option(
    "--force-relation", run_flags.overrides, "INFLUENCER>REACTOR, repeatable");
  run_cmd->add_option("--out", run_flags.out, "output directory (default $RELSIM_OUT_DIR or out)");

  BatchFlags batch_flags;
  auto * batch_cmd = app.add_subcommand("batch", "evaluate policies over many scenarios");
  auto * dir_opt = batch_cmd->add_option("--dir", batch_flags.dir, "directory of scenario files");
  auto * sweep_opt = batch_cmd->add_option(
    "--sweep", batch_flags.sweep, "car-following | crossing | chain | collision-free");
  dir_opt->excludes(sweep_opt);
  batch_cmd->add_option("--count", batch_flags.count, "scenes in a sweep")->capture_default_str();
  batch_cmd->add_option("--seed", batch_flags.seed, "base seed")->capture_default_str();
  batch_cmd->add_option("--workers", batch_flags.workers, "worker threads")->capture_default_str();
  batch_cmd->add_option("--policies", batch_flags.policies, "comma-separated policy labels")
    ->capture_default_str();
  add_planner_flags(*batch_cmd, batch_flags.planner);
  batch_cmd->add_option("--out", batch_flags.out, "output directory");

  std::string trace_path;
  std::string render_out;
  auto * render_cmd = app.add_subcommand("render", "write one SVG per step of a trace");
  render_cmd->add_option("--trace", trace_path, "trace.json from run")->required();
  render_cmd->add_option("--out", render_out, "output directory");

  GenOptions gen_flags;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto * gen_cmd = app.add_subcommand("generate", "write a synthetic scenario file");
  gen_cmd->add_option("--gen", gen_flags.kind, "car-following | crossing | chain")->required();
  add_generator_flags(*gen_cmd, gen_flags);
  gen_cmd->add_option("--seed", gen_seed, "scenario seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_flags, out);
    }
    if (batch_cmd->parsed()) {
      return cmd_batch(batch_flags, out);
    }
    if (render_cmd->parsed()) {
      return cmd_render(trace_path, render_out, out);
    }
    return cmd_generate(gen_flags, gen_seed, gen_out, out);
  } catch (const UsageError & e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace relsim::cli
