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
#include <unordered_map>
#include <vector>

#include "moctopus/fabric.hpp"

namespace moctopus {

/// One high-degree node's host row: a contiguous slot array (cols_vector)
/// whose free slots hold the sentinel. Capacity is a power of two and slots
/// keep their positions for life — deletion writes the sentinel instead of
/// compacting, because the PIM-side shard references positions.
struct HostRow {
  std::vector<NodeId> cols;
  std::uint64_t occupied = 0;
};

/// Host-side storage for promoted (high-degree) nodes. Queries are a single
/// contiguous scan with no module traffic; updates delegate edge retrieval
/// and slot management to the node's supplementary shard, which lives on
/// module mix64(node) % P.
class HostStore {
 public:
  explicit HostStore(Fabric& fabric, std::uint32_t initial_capacity = 32);

  bool is_resident(NodeId node) const { return rows_.contains(node); }
  std::size_t resident_count() const { return rows_.size(); }
  const HostRow* row(NodeId node) const;
  std::uint32_t shard_module_of(NodeId node) const;

  /// Inserts via the shard protocol: check/alloc on the shard, then a
  /// single slot write here. A full row doubles its capacity (new slots
  /// handed to the shard's free list) and retries once.
  AddResult insert_edge(NodeId u, NodeId v);

  /// Frees the slot on the shard and writes the sentinel locally.
  SubResult delete_edge(NodeId u, NodeId v);

  /// All occupied slots in position order. One contiguous scan, zero
  /// dispatches; counts one host lookup.
  std::vector<NodeId> scan_next_hops(NodeId u);

  /// Builds the row for a node newly moved off a module: neighbors packed
  /// at the front, capacity the smallest power of two holding them (at
  /// least initial_capacity), and the shard bulk-initialized to match.
  void promote_node(NodeId u, std::vector<NodeId> adjacency);

 private:
  HostRow& require_row(NodeId u, const char* op);
  void grow(NodeId u, HostRow& row);

  Fabric* fabric_;
  std::uint32_t initial_capacity_;
  std::unordered_map<NodeId, HostRow> rows_;
};

}  // namespace moctopus
