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
#include "moctopus/host_store.hpp"

#include <algorithm>
#include <bit>

#include "moctopus/kernels.hpp"

namespace moctopus {

HostStore::HostStore(Fabric& fabric, std::uint32_t initial_capacity)
    : fabric_(&fabric), initial_capacity_(std::max(1u, initial_capacity)) {}

const HostRow* HostStore::row(NodeId node) const {
  auto it = rows_.find(node);
  return it == rows_.end() ? nullptr : &it->second;
}

std::uint32_t HostStore::shard_module_of(NodeId node) const {
  return std::uint32_t(kernels::mix64(node) % fabric_->config().module_count);
}

HostRow& HostStore::require_row(NodeId u, const char* op) {
  auto it = rows_.find(u);
  if (it == rows_.end())
    throw ContractViolation(std::string(op) + ": node is not host-resident");
  return it->second;
}

void HostStore::grow(NodeId u, HostRow& row) {
  const std::uint32_t old_capacity = std::uint32_t(row.cols.size());
  row.cols.resize(std::size_t(old_capacity) * 2, kSentinelNode);
  std::vector<std::uint32_t> fresh(old_capacity);
  for (std::uint32_t i = 0; i < old_capacity; ++i) fresh[i] = old_capacity + i;
  fabric_->dispatch(shard_module_of(u), ExtendFreeOp{u, std::move(fresh)});
}

AddResult HostStore::insert_edge(NodeId u, NodeId v) {
  HostRow& row = require_row(u, "host_insert_edge");
  const std::uint32_t shard = shard_module_of(u);
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto reply = std::get<AllocReply>(fabric_->dispatch(shard, EdgeCheckAllocOp{u, v}));
    switch (reply.kind) {
      case AllocReply::Kind::kExistsAt:
        return AddResult::kDuplicate;
      case AllocReply::Kind::kAllocatedAt:
        row.cols[reply.pos] = v;
        row.occupied += 1;
        return AddResult::kInserted;
      case AllocReply::Kind::kNeedGrow:
        if (attempt == 1) throw ProtocolError("host_insert_edge: grow did not yield a free slot");
        grow(u, row);
        break;
    }
  }
  throw ProtocolError("host_insert_edge: unreachable");
}

SubResult HostStore::delete_edge(NodeId u, NodeId v) {
  HostRow& row = require_row(u, "host_delete_edge");
  auto reply = std::get<FreeReply>(fabric_->dispatch(shard_module_of(u), EdgeFreeOp{u, v}));
  if (!reply.found) return SubResult::kNotFound;
  row.cols[reply.pos] = kSentinelNode;
  row.occupied -= 1;
  return SubResult::kRemoved;
}

std::vector<NodeId> HostStore::scan_next_hops(NodeId u) {
  HostRow& row = require_row(u, "host_scan_next_hops");
  std::vector<NodeId> hops(row.cols.size());
  hops.resize(kernels::compact_nonsentinel(row.cols, hops.data()));
  fabric_->ledger().host_lookups += 1;
  return hops;
}

void HostStore::promote_node(NodeId u, std::vector<NodeId> adjacency) {
  if (rows_.contains(u)) throw ContractViolation("promote_node: node already host-resident");
  const std::uint64_t needed = std::max<std::uint64_t>(adjacency.size(), initial_capacity_);
  const std::uint32_t capacity = std::uint32_t(std::bit_ceil(needed));

  HostRow row;
  row.cols.assign(capacity, kSentinelNode);
  std::copy(adjacency.begin(), adjacency.end(), row.cols.begin());
  row.occupied = adjacency.size();

  fabric_->dispatch(shard_module_of(u), ShardInitOp{u, std::move(adjacency), capacity});
  rows_.emplace(u, std::move(row));
}

}  // namespace moctopus
