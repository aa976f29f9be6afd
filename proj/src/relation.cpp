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

#include "relsim/relation.hpp"

#include <algorithm>
#include <cctype>

namespace relsim
{

namespace
{

std::string trim(std::string_view s)
{
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) {
    s.remove_prefix(1);
  }
  while (!s.empty() && is_space(s.back())) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

std::pair<std::string, std::string> pair_key(std::string_view a, std::string_view b)
{
  return a < b ? std::pair{std::string(a), std::string(b)}
               : std::pair{std::string(b), std::string(a)};
}

}  // namespace

const char * to_string(RelationSource source)
{
  return source == RelationSource::kOverride ? "override" : "oracle";
}

RelationLabel parse_override(std::string_view spec)
{
  const auto pos = spec.find('>');
  if (pos == std::string_view::npos || spec.find('>', pos + 1) != std::string_view::npos) {
    throw std::invalid_argument(
      "relation override must look like INFLUENCER>REACTOR, got '" + std::string(spec) + "'");
  }
  RelationLabel label;
  label.influencer = trim(spec.substr(0, pos));
  label.reactor = trim(spec.substr(pos + 1));
  label.source = RelationSource::kOverride;
  if (label.influencer.empty() || label.reactor.empty()) {
    throw std::invalid_argument("relation override has an empty id: '" + std::string(spec) + "'");
  }
  if (label.influencer == label.reactor) {
    throw std::invalid_argument("relation override pairs an agent with itself: " + label.reactor);
  }
  return label;
}

void OverrideRegistry::add(RelationLabel label)
{
  if (label.influencer == label.reactor) {
    throw std::invalid_argument("relation override pairs an agent with itself: " + label.reactor);
  }
  label.source = RelationSource::kOverride;
  auto key = pair_key(label.influencer, label.reactor);
  if (labels_.count(key) != 0) {
    throw std::invalid_argument(
      "duplicate relation override for pair " + key.first + "/" + key.second);
  }
  labels_.emplace(std::move(key), std::move(label));
}

std::optional<RelationLabel> OverrideRegistry::find(std::string_view a, std::string_view b) const
{
  const auto it = labels_.find(pair_key(a, b));
  if (it == labels_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<RelationLabel> OverrideRegistry::labels() const
{
  std::vector<RelationLabel> out;
  out.reserve(labels_.size());
  for (const auto & [key, label] : labels_) {
    out.push_back(label);
  }
  return out;
}

RelationLabel infer_relation(
  const Trajectory & traj_a, const Trajectory & traj_b, const std::string & id_a,
  const std::string & id_b, const BoxDims & dims_a, const BoxDims & dims_b,
  const OverrideRegistry & overrides)
{
  if (id_a == id_b) {
    throw std::invalid_argument("relation requested for a single agent: " + id_a);
  }
  if (auto forced = overrides.find(id_a, id_b)) {
    return *forced;
  }
  if (id_b < id_a) {
    return infer_relation(traj_b, traj_a, id_b, id_a, dims_b, dims_a);
  }

  const auto cross = cross_point(traj_a, traj_b, dims_a, dims_b);
  if (!cross) {
    throw NotInConflictError("agents " + id_a + " and " + id_b + " are not in conflict");
  }
  // An agent that never reaches the point arrives after every one that does.
  const auto arrival = [](bool reaches, int index) {
    return std::pair{reaches ? 0 : 1, reaches ? index : 0};
  };
  const auto arr_a = arrival(cross->reaches_a, cross->index_a);
  const auto arr_b = arrival(cross->reaches_b, cross->index_b);

  bool a_first;
  if (arr_a != arr_b) {
    a_first = arr_a < arr_b;
  } else {
    const double va = traj_a.at(cross->index_a).speed;
    const double vb = traj_b.at(cross->index_b).speed;
    a_first = va != vb ? va > vb : true;
  }
  return a_first ? RelationLabel{id_a, id_b, RelationSource::kOracle}
                 : RelationLabel{id_b, id_a, RelationSource::kOracle};
}

RelationLabel CrossPointOracle::predict(const RelationQuery & q) const
{
  return infer_relation(*q.traj_a, *q.traj_b, q.id_a, q.id_b, q.dims_a, q.dims_b);
}

RelationLabel EgoAlwaysInfluencer::predict(const RelationQuery & q) const
{
  if (q.id_a == q.ego_id) {
    return {q.id_a, q.id_b, RelationSource::kOracle};
  }
  if (q.id_b == q.ego_id) {
    return {q.id_b, q.id_a, RelationSource::kOracle};
  }
  return oracle_.predict(q);
}

OverridePredictor::OverridePredictor(
  OverrideRegistry overrides, std::shared_ptr<const RelationPredictor> inner)
: overrides_(std::move(overrides)), inner_(std::move(inner))
{
  if (!inner_) {
    inner_ = std::make_shared<CrossPointOracle>();
  }
}

RelationLabel OverridePredictor::predict(const RelationQuery & q) const
{
  if (auto forced = overrides_.find(q.id_a, q.id_b)) {
    return *forced;
  }
  return inner_->predict(q);
}

}  // namespace relsim
