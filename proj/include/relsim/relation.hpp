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

#ifndef RELSIM__RELATION_HPP_
#define RELSIM__RELATION_HPP_

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relsim/geometry.hpp"
#include "relsim/types.hpp"

namespace relsim
{

enum class RelationSource { kOracle, kOverride };

const char * to_string(RelationSource source);

/// Ordered interaction: the reactor yields to the influencer.
struct RelationLabel
{
  std::string influencer;
  std::string reactor;
  RelationSource source = RelationSource::kOracle;

  friend bool operator==(const RelationLabel &, const RelationLabel &) = default;
};

/// Parses "A>B" (A influences B). Throws std::invalid_argument unless there
/// is exactly one '>' between two distinct non-empty ids.
RelationLabel parse_override(std::string_view spec);

/// Manually forced relations, at most one per unordered pair.
class OverrideRegistry
{
public:
  /// Throws std::invalid_argument for a self pair or a pair already present.
  void add(RelationLabel label);
  void add(std::string_view spec) { add(parse_override(spec)); }

  std::optional<RelationLabel> find(std::string_view a, std::string_view b) const;
  bool empty() const { return labels_.empty(); }
  std::size_t size() const { return labels_.size(); }
  std::vector<RelationLabel> labels() const;

private:
  std::map<std::pair<std::string, std::string>, RelationLabel> labels_;
};

/// Raised when a relation is requested for a pair that has neither a path
/// crossing nor a collision.
class NotInConflictError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/**
 * Influencer/reactor label for two trajectories covering the same steps.
 *
 * An override for the pair wins. Otherwise the agent reaching the cross
 * point at the earlier step influences; ties go to the higher speed at its
 * arrival step, then to the lexicographically smaller id. The result does
 * not depend on argument order.
 */
RelationLabel infer_relation(
  const Trajectory & traj_a, const Trajectory & traj_b, const std::string & id_a,
  const std::string & id_b, const BoxDims & dims_a, const BoxDims & dims_b,
  const OverrideRegistry & overrides = {});

struct RelationQuery
{
  std::string id_a;
  std::string id_b;
  const Trajectory * traj_a = nullptr;
  const Trajectory * traj_b = nullptr;
  BoxDims dims_a;
  BoxDims dims_b;
  std::string ego_id;
};

class RelationPredictor
{
public:
  virtual ~RelationPredictor() = default;
  virtual RelationLabel predict(const RelationQuery & query) const = 0;
};

/// Arrival-order rule of infer_relation without overrides.
class CrossPointOracle : public RelationPredictor
{
public:
  RelationLabel predict(const RelationQuery & query) const override;
};

/// Ego influences every pair it is part of; other pairs use the oracle.
class EgoAlwaysInfluencer : public RelationPredictor
{
public:
  RelationLabel predict(const RelationQuery & query) const override;

private:
  CrossPointOracle oracle_;
};

/// Consults `overrides` first and falls back to `inner`.
class OverridePredictor : public RelationPredictor
{
public:
  OverridePredictor(OverrideRegistry overrides, std::shared_ptr<const RelationPredictor> inner);
  RelationLabel predict(const RelationQuery & query) const override;

private:
  OverrideRegistry overrides_;
  std::shared_ptr<const RelationPredictor> inner_;
};

}  // namespace relsim

#endif  // RELSIM__RELATION_HPP_
