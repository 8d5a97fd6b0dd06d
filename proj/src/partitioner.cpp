/*
 * Copyright 2026 the moctopus-sim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "moctopus/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "moctopus/kernels.hpp"

namespace moctopus {

std::uint64_t capacity_limit(std::uint64_t total_assigned, std::uint32_t module_count,
                             const PartitionerConfig& config) {
  const std::uint64_t factor_micro = std::uint64_t(std::llround(config.capacity_factor * 1e6));
  const std::uint64_t den = 1'000'000ull * module_count;
  const std::uint64_t limit = (factor_micro * total_assigned + den - 1) / den;
  return std::max(limit, config.capacity_floor);
}

Partitioner::Partitioner(std::uint32_t module_count, PartitionerConfig config, PartitionMode mode)
    : config_(config), mode_(mode), loads_(module_count, 0) {
  if (module_count < 1) throw ContractViolation("partitioner: module_count must be >= 1");
  if (config_.capacity_factor <= 1.0)
    throw ContractViolation("partitioner: capacity_factor must be > 1");
  if (config_.degree_threshold < 1)
    throw ContractViolation("partitioner: degree_threshold must be >= 1");
}

std::optional<PartitionLoc> Partitioner::location(NodeId node) const {
  auto it = directory_.find(node);
  if (it == directory_.end()) return std::nullopt;
  return it->second.loc;
}

std::uint64_t Partitioner::out_degree(NodeId node) const {
  auto it = directory_.find(node);
  return it == directory_.end() ? 0 : it->second.out_degree;
}

std::uint64_t Partitioner::capacity_limit() const {
  return moctopus::capacity_limit(total_assigned_, module_count(), config_);
}

std::vector<NodeId> Partitioner::known_node_ids_sorted() const {
  std::vector<NodeId> ids;
  ids.reserve(directory_.size());
  for (const auto& [node, info] : directory_) ids.push_back(node);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::uint32_t Partitioner::hash_fallback(NodeId node) const {
  const std::uint64_t limit = capacity_limit();
  std::vector<std::uint32_t> eligible;
  eligible.reserve(loads_.size());
  for (std::uint32_t m = 0; m < loads_.size(); ++m)
    if (loads_[m] < limit) eligible.push_back(m);
  if (eligible.empty())
    throw ProtocolError("hash_fallback: no module below the capacity limit");
  return eligible[kernels::mix64(node) % eligible.size()];
}

bool Partitioner::forced_mispartition(NodeId node) const {
  if (config_.mispartition_fraction <= 0.0) return false;
  const std::uint64_t h = kernels::mix64(config_.mispartition_seed ^ kernels::mix64(node));
  return (double(h >> 11) * 0x1.0p-53) < config_.mispartition_fraction;
}

PartitionLoc Partitioner::assign_new_node(NodeId node, std::optional<NodeId> first_neighbor) {
  if (directory_.contains(node)) throw ContractViolation("assign_new_node: node already assigned");

  std::uint32_t target;
  if (mode_ == PartitionMode::kHash) {
    target = std::uint32_t(kernels::mix64(node) % loads_.size());
  } else {
    std::optional<std::uint32_t> greedy;
    if (first_neighbor) {
      auto it = directory_.find(*first_neighbor);
      if (it != directory_.end() && it->second.loc.is_module()) {
        std::uint32_t m = it->second.loc.module_id();
        if (loads_[m] < capacity_limit()) greedy = m;
      }
    }
    if (greedy && forced_mispartition(node)) greedy.reset();
    target = greedy ? *greedy : hash_fallback(node);
  }

  PartitionLoc loc = PartitionLoc::module(target);
  directory_.emplace(node, NodeInfo{loc, 0});
  loads_[target] += 1;
  total_assigned_ += 1;
  return loc;
}

std::vector<PlacementAction> Partitioner::on_edge_inserted(NodeId u, NodeId v) {
  std::vector<PlacementAction> actions;

  // Destination first, so a brand-new pair has a concrete anchor.
  if (!knows(v)) {
    std::optional<NodeId> anchor = knows(u) ? std::optional<NodeId>(u) : std::nullopt;
    PartitionLoc loc = assign_new_node(v, anchor);
    actions.push_back(PlacementAction{PlacementAction::Kind::kAssign, v, loc});
  }
  if (!knows(u)) {
    PartitionLoc loc = assign_new_node(u, v);
    actions.push_back(PlacementAction{PlacementAction::Kind::kAssign, u, loc});
  }

  NodeInfo& info = directory_.at(u);
  info.out_degree += 1;
  if (mode_ == PartitionMode::kMoctopus && info.out_degree > config_.degree_threshold &&
      info.loc.is_module())
    actions.push_back(PlacementAction{PlacementAction::Kind::kPromote, u, info.loc});
  return actions;
}

void Partitioner::note_edge_removed(NodeId u) {
  auto it = directory_.find(u);
  if (it == directory_.end() || it->second.out_degree == 0)
    throw ContractViolation("note_edge_removed: no edge to remove");
  it->second.out_degree -= 1;
}

void Partitioner::set_host(NodeId node) {
  auto it = directory_.find(node);
  if (it == directory_.end()) throw ContractViolation("set_host: unknown node");
  if (it->second.loc.is_host()) return;
  loads_[it->second.loc.module_id()] -= 1;
  total_assigned_ -= 1;
  it->second.loc = PartitionLoc::host();
}

MigrationPlan Partitioner::plan_migrations(
    std::span<const DetectionReport> reports,
    const std::function<std::vector<NodeId>(NodeId)>& fetch_adjacency) const {
  MigrationPlan plan;
  const std::uint64_t limit = capacity_limit();  // moves keep the total constant
  std::vector<std::uint64_t> planned_loads(loads_.begin(), loads_.end());

  // First resolve every candidate's source and plurality target against the
  // pre-plan directory; one metered adjacency fetch per reported node.
  struct Candidate {
    NodeId node;
    std::uint32_t from;
    std::uint32_t to;
  };
  std::vector<Candidate> pending;
  for (const DetectionReport& report : reports) {
    auto it = directory_.find(report.node);
    if (it == directory_.end() || !it->second.loc.is_module()) continue;  // promoted meanwhile
    if (report.pim_resident_degree < 2) continue;
    if (double(report.local_hits) >=
        config_.migration_hit_fraction * double(report.pim_resident_degree))
      continue;

    const std::uint32_t from = it->second.loc.module_id();

    // Plurality of next-hops over residing modules; host-resident and
    // unknown neighbors are excluded (the host serves them regardless).
    std::map<std::uint32_t, std::uint64_t> counts;
    for (NodeId hop : fetch_adjacency(report.node)) {
      auto hop_it = directory_.find(hop);
      if (hop_it == directory_.end() || !hop_it->second.loc.is_module()) continue;
      counts[hop_it->second.loc.module_id()] += 1;
    }
    if (counts.empty()) continue;
    std::uint32_t target = 0;
    std::uint64_t best = 0;
    for (const auto& [m, count] : counts) {  // ascending ids: ties -> lowest
      if (count > best) {
        best = count;
        target = m;
      }
    }
    if (target == from) continue;
    pending.push_back(Candidate{report.node, from, target});
  }

  // Admit candidates whose target has headroom, sweeping until a fixpoint:
  // every admitted move frees a slot at its source, which can unblock
  // candidates headed there. Deterministic, since candidates keep their
  // report order within each sweep.
  bool admitted = true;
  while (admitted) {
    admitted = false;
    std::vector<Candidate> still_blocked;
    for (const Candidate& candidate : pending) {
      if (planned_loads[candidate.to] < limit) {
        planned_loads[candidate.to] += 1;
        planned_loads[candidate.from] -= 1;
        plan.moves.push_back(MigrationPlan::Move{candidate.node, candidate.from, candidate.to});
        admitted = true;
      } else {
        still_blocked.push_back(candidate);
      }
    }
    pending = std::move(still_blocked);
  }
  return plan;
}

std::size_t Partitioner::apply_migration(const MigrationPlan& plan, const MigrationHooks& hooks) {
  std::size_t applied = 0;
  for (const MigrationPlan::Move& move : plan.moves) {
    auto it = directory_.find(move.node);
    if (it == directory_.end()) continue;
    if (it->second.loc != PartitionLoc::module(move.from)) continue;  // stale: promoted/moved
    if (loads_[move.to] >= capacity_limit()) continue;  // headroom vanished since planning

    std::vector<NodeId> hops = hooks.extract(move.node, move.from);
    hooks.insert(move.node, move.to, std::move(hops));
    it->second.loc = PartitionLoc::module(move.to);
    loads_[move.from] -= 1;
    loads_[move.to] += 1;
    ++applied;
  }
  return applied;
}

void Partitioner::audit() const {
  std::vector<std::uint64_t> recount(loads_.size(), 0);
  std::uint64_t assigned = 0;
  for (const auto& [node, info] : directory_) {
    if (info.loc.is_module()) {
      recount[info.loc.module_id()] += 1;
      assigned += 1;
    }
  }
  if (assigned != total_assigned_ || recount != loads_)
    throw ProtocolError("partitioner audit: loads[] out of sync with the directory");
}

}  // namespace moctopus
