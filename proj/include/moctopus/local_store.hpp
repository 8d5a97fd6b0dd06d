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
#include <set>
#include <unordered_map>
#include <vector>

#include "moctopus/common.hpp"
#include "moctopus/wire.hpp"

namespace moctopus {

/// One simulated PIM module: the operator processor plus its local graph
/// storage (NodeId -> next-hop list) and the supplementary shard maps that
/// serve host-resident rows (edge -> slot position, node -> free slots).
///
/// A module owns its state exclusively; the host talks to it only through
/// handle(). Nothing here touches the cost ledger — all accounting is done
/// by the host coordinator from the message contents.
class PimModule {
 public:
  OperatorReply handle(const OperatorRequest& request);

  // Introspection for tests, invariant audits, and stats reporting.
  const std::vector<NodeId>* adjacency_of(NodeId node) const;
  bool has_adjacency_key(NodeId node) const { return adjacency_.contains(node); }
  std::size_t resident_entries() const { return adjacency_.size(); }

  const std::unordered_map<NodeId, std::uint32_t>* shard_positions(NodeId src) const;
  const std::set<std::uint32_t>* shard_free_list(NodeId src) const;

  /// Rough byte footprint of the local storage, used for the module memory
  /// budget accounting check (budget overruns are reported, not enforced).
  std::uint64_t estimated_bytes() const;

 private:
  SmxmReply smxm(const SmxmOp& op);
  AllocReply edge_check_alloc(const EdgeCheckAllocOp& op);
  FreeReply edge_free(const EdgeFreeOp& op);

  std::unordered_map<NodeId, std::vector<NodeId>> adjacency_;
  // Supplementary maps for host-resident rows sharded onto this module:
  // per source, edge destination -> slot position, and the free slot set.
  // Free slots are handed out minimum-first so allocation is deterministic.
  std::unordered_map<NodeId, std::unordered_map<NodeId, std::uint32_t>> elem_position_map_;
  std::unordered_map<NodeId, std::set<std::uint32_t>> free_list_map_;
};

}  // namespace moctopus
