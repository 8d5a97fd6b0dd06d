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
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "moctopus/fabric.hpp"

namespace moctopus {

enum class PartitionMode : std::uint8_t {
  kMoctopus,  // greedy first-neighbor placement, host promotion, migration
  kHash,      // every node hashed onto a module; no host side, no migration
};

struct PartitionerConfig {
  std::uint32_t degree_threshold = 16;  // out-degree above this moves a node to the host
  double capacity_factor = 1.05;        // per-module ceiling vs. average assigned nodes
  std::uint64_t capacity_floor = 16;    // keeps the ceiling sane on near-empty systems
  double migration_hit_fraction = 0.5;  // below this local-hit share a node migrates
  // Test/benchmark knob: probability of deliberately replacing a greedy
  // placement with the hash fallback, to seed mispartitioned nodes.
  double mispartition_fraction = 0.0;
  std::uint64_t mispartition_seed = 0;
};

struct PlacementAction {
  enum class Kind : std::uint8_t { kAssign, kPromote };
  Kind kind = Kind::kAssign;
  NodeId node = 0;
  PartitionLoc loc;  // assignment target (meaningless for kPromote)
};

struct MigrationPlan {
  struct Move {
    NodeId node = 0;
    std::uint32_t from = 0;
    std::uint32_t to = 0;
  };
  std::vector<Move> moves;
};

/// Storage callbacks apply_migration uses to move a node's adjacency
/// between modules; the partitioner itself only updates the directory.
struct MigrationHooks {
  std::function<std::vector<NodeId>(NodeId node, std::uint32_t from)> extract;
  std::function<void(NodeId node, std::uint32_t to, std::vector<NodeId> hops)> insert;
};

/// Per-module ceiling on assigned nodes: max(ceil(factor * total / P), floor).
/// The factor is quantized to micro-units so the ceiling is computed in
/// exact integer arithmetic.
std::uint64_t capacity_limit(std::uint64_t total_assigned, std::uint32_t module_count,
                             const PartitionerConfig& config);

/// The host-side node directory plus the placement policy. Every known node
/// has exactly one location and an out-degree; loads[] tracks assigned
/// nodes per module. Single-threaded by design: only the host coordinator
/// mutates it, modules never see it.
class Partitioner {
 public:
  Partitioner(std::uint32_t module_count, PartitionerConfig config, PartitionMode mode);

  bool knows(NodeId node) const { return directory_.contains(node); }
  std::optional<PartitionLoc> location(NodeId node) const;
  std::uint64_t out_degree(NodeId node) const;

  std::uint32_t module_count() const { return std::uint32_t(loads_.size()); }
  std::span<const std::uint64_t> loads() const { return loads_; }
  std::uint64_t total_assigned() const { return total_assigned_; }
  std::uint64_t capacity_limit() const;
  PartitionMode mode() const { return mode_; }
  const PartitionerConfig& config() const { return config_; }

  std::size_t known_nodes() const { return directory_.size(); }
  std::vector<NodeId> known_node_ids_sorted() const;

  /// Places a never-seen node. Greedy rule: join the first neighbor's
  /// module when it is known, module-resident, and under capacity;
  /// otherwise fall back to hashing over the modules below the limit.
  /// Hash mode ignores the neighbor entirely.
  PartitionLoc assign_new_node(NodeId node, std::optional<NodeId> first_neighbor);

  /// Deterministic fallback: hash the node over the modules whose load is
  /// below the current capacity limit (ids ascending).
  std::uint32_t hash_fallback(NodeId node) const;

  /// Registers one inserted edge u->v that is known NOT to be a duplicate
  /// (the caller resolves duplicates against storage first). Assigns
  /// unknown endpoints (v before u, so a brand-new pair has an anchor),
  /// bumps u's out-degree, and emits a promotion action when the degree
  /// crosses the threshold while u sits on a module. Returned actions are
  /// ordered: assignments first, then the promotion.
  std::vector<PlacementAction> on_edge_inserted(NodeId u, NodeId v);

  /// Degree bookkeeping for a confirmed edge removal.
  void note_edge_removed(NodeId u);

  /// Marks a node host-resident after its storage moved (promotion).
  void set_host(NodeId node);

  /// Builds a migration plan from detection reports. For each report that
  /// passes the hit-fraction filter, fetches the node's adjacency (the
  /// callback dispatches to its module, so the fetch is metered), counts
  /// next-hops per residing module, and targets the plurality module if it
  /// differs from the current one and has capacity headroom. Planning
  /// simulates its own moves so a plan never overfills a target.
  MigrationPlan plan_migrations(
      std::span<const DetectionReport> reports,
      const std::function<std::vector<NodeId>(NodeId)>& fetch_adjacency) const;

  /// Executes a plan through the storage hooks, skipping moves whose node
  /// no longer sits at the recorded source module or whose target lost its
  /// headroom since planning. Returns the number of moves applied.
  std::size_t apply_migration(const MigrationPlan& plan, const MigrationHooks& hooks);

  /// Recounts loads[] from the directory and checks one-home consistency;
  /// throws on mismatch. Test and audit hook.
  void audit() const;

 private:
  struct NodeInfo {
    PartitionLoc loc;
    std::uint64_t out_degree = 0;
  };

  bool forced_mispartition(NodeId node) const;

  PartitionerConfig config_;
  PartitionMode mode_;
  std::unordered_map<NodeId, NodeInfo> directory_;
  std::vector<std::uint64_t> loads_;
  std::uint64_t total_assigned_ = 0;  // nodes currently on modules
};

}  // namespace moctopus
