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

#include <map>
#include <span>
#include <vector>

#include "moctopus/fabric.hpp"
#include "moctopus/host_store.hpp"
#include "moctopus/partitioner.hpp"

namespace moctopus {

/// A batch of fixed-source queries; query q's id is its list index.
/// Sources may repeat — identical sources are still distinct queries.
struct QueryBatch {
  std::vector<NodeId> sources;
};

/// k rounds of smxm fan-out plus mwait reduction.
struct QueryPlan {
  std::uint32_t hops = 1;
};

/// Rejects k == 0; a plan always expands through the adjacency at least once.
QueryPlan compile_khop(const QueryBatch& batch, std::uint32_t k);

/// Per-query result sets, sorted ascending and duplicate-free
/// (reachability semantics: walk multiplicity is collapsed).
struct QueryOutcome {
  std::vector<std::vector<NodeId>> answers;
};

enum class UpdateStatus : std::uint8_t { kInserted, kDuplicate, kRemoved, kNotFound };

struct MigrationOutcome {
  std::size_t reports_considered = 0;
  std::size_t moves_planned = 0;
  std::size_t moves_applied = 0;
};

/// The assembled machine: fabric + partitioner + host store, driven by the
/// host-side query processor. Query batches and update batches are
/// mutually exclusive phases; migration passes run at query-batch
/// boundaries, consuming the detection reports the batch produced.
class System {
 public:
  System(FabricConfig fabric_config, PartitionerConfig partitioner_config, PartitionMode mode);

  /// Applies a batch of edge events in order and returns one status per
  /// event. Inserts assign unknown endpoints, bump degrees, and promote
  /// nodes whose out-degree crosses the threshold; deletes are benign
  /// no-ops when the edge is absent.
  std::vector<UpdateStatus> process_update_batch(std::span<const EdgeEvent> events);

  /// Runs the k-hop plan: each round splits the frontier by residency
  /// (host rows are scanned locally, module slices go out as one smxm
  /// round), then mwait gathers, deduplicates per query, and charges
  /// module-to-module forwarding for every returned id whose owner is a
  /// different module than the replier. Host-resident destinations charge
  /// no forwarding — the host already holds the data.
  QueryOutcome execute(const QueryPlan& plan, const QueryBatch& batch);

  QueryOutcome run_query_batch(const QueryBatch& batch, std::uint32_t k) {
    return execute(compile_khop(batch, k), batch);
  }

  /// Plans and applies migrations from the reports collected since the
  /// last pass, then clears them. No-op under hash partitioning.
  MigrationOutcome run_migration_pass();

  Fabric& fabric() { return fabric_; }
  const Fabric& fabric() const { return fabric_; }
  Partitioner& partitioner() { return partitioner_; }
  const Partitioner& partitioner() const { return partitioner_; }
  HostStore& host_store() { return host_store_; }
  const HostStore& host_store() const { return host_store_; }

  std::uint64_t promotions() const { return promotions_; }
  std::size_t pending_report_count() const { return pending_reports_.size(); }

 private:
  AddResult route_add(NodeId u, NodeId v);
  SubResult route_sub(NodeId u, NodeId v);
  void run_actions(std::span<const PlacementAction> actions);
  void promote(NodeId node);

  Fabric fabric_;
  Partitioner partitioner_;
  HostStore host_store_;
  std::uint64_t promotions_ = 0;
  // Batch-level dedup of detection reports: keyed by node (keep the most
  // recent), ordered so migration planning is deterministic.
  std::map<NodeId, DetectionReport> pending_reports_;
};

}  // namespace moctopus
