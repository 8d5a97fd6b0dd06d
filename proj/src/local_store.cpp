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
#include "moctopus/local_store.hpp"

#include <algorithm>

namespace moctopus {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

OperatorReply PimModule::handle(const OperatorRequest& request) {
  return std::visit(
      Overloaded{
          [&](const SmxmOp& op) -> OperatorReply { return smxm(op); },
          [&](const AddOp& op) -> OperatorReply {
            auto& hops = adjacency_[op.src];
            if (std::find(hops.begin(), hops.end(), op.dst) != hops.end())
              return AddResult::kDuplicate;
            hops.push_back(op.dst);
            return AddResult::kInserted;
          },
          [&](const SubOp& op) -> OperatorReply {
            auto it = adjacency_.find(op.src);
            if (it == adjacency_.end()) return SubResult::kNotFound;
            auto pos = std::find(it->second.begin(), it->second.end(), op.dst);
            if (pos == it->second.end()) return SubResult::kNotFound;
            it->second.erase(pos);  // empty entries are retained; smxm treats
                                    // an empty list and a missing key alike
            return SubResult::kRemoved;
          },
          [&](const FetchAdjOp& op) -> OperatorReply {
            auto it = adjacency_.find(op.node);
            if (it == adjacency_.end()) return AdjacencyReply{};
            return AdjacencyReply{it->second};
          },
          [&](const MigrateOutOp& op) -> OperatorReply {
            auto it = adjacency_.find(op.node);
            if (it == adjacency_.end()) return AdjacencyReply{};
            AdjacencyReply reply{std::move(it->second)};
            adjacency_.erase(it);
            return reply;
          },
          [&](const MigrateInOp& op) -> OperatorReply {
            if (adjacency_.contains(op.node))
              throw ContractViolation("migrate_in: node already resident");
            adjacency_.emplace(op.node, op.next_hops);
            return AckReply{};
          },
          [&](const EdgeCheckAllocOp& op) -> OperatorReply { return edge_check_alloc(op); },
          [&](const EdgeFreeOp& op) -> OperatorReply { return edge_free(op); },
          [&](const ExtendFreeOp& op) -> OperatorReply {
            auto& free_set = free_list_map_[op.src];
            free_set.insert(op.positions.begin(), op.positions.end());
            return AckReply{};
          },
          [&](const ShardInitOp& op) -> OperatorReply {
            if (elem_position_map_.contains(op.src) || free_list_map_.contains(op.src))
              throw ContractViolation("shard_init: shard already initialized");
            auto& positions = elem_position_map_[op.src];
            for (std::uint32_t i = 0; i < op.next_hops.size(); ++i)
              positions.emplace(op.next_hops[i], i);
            auto& free_set = free_list_map_[op.src];
            for (std::uint32_t p = std::uint32_t(op.next_hops.size()); p < op.capacity; ++p)
              free_set.insert(p);
            return AckReply{};
          },
      },
      request);
}

SmxmReply PimModule::smxm(const SmxmOp& op) {
  SmxmReply reply;
  reply.hits.reserve(op.frontier.size());
  std::vector<NodeId> reported;  // dedup per call, first-touch order
  for (const FrontierEntry& entry : op.frontier) {
    auto it = adjacency_.find(entry.node);
    const std::vector<NodeId>* hops = (it == adjacency_.end()) ? nullptr : &it->second;
    reply.hits.push_back(SmxmHit{entry.query, hops ? *hops : std::vector<NodeId>{}});

    if (!op.detect || !hops || hops->empty()) continue;
    if (std::find(reported.begin(), reported.end(), entry.node) != reported.end()) continue;
    reported.push_back(entry.node);

    // A module only knows its own keys, so locality is approximated by key
    // membership; the host re-filters with the real partitioning vector.
    std::uint32_t local_hits = 0;
    for (NodeId hop : *hops) local_hits += adjacency_.contains(hop) ? 1 : 0;
    if (local_hits < hops->size())
      reply.reports.push_back(
          DetectionReport{entry.node, local_hits, std::uint32_t(hops->size())});
  }
  return reply;
}

AllocReply PimModule::edge_check_alloc(const EdgeCheckAllocOp& op) {
  auto& positions = elem_position_map_[op.src];
  if (auto it = positions.find(op.dst); it != positions.end())
    return AllocReply{AllocReply::Kind::kExistsAt, it->second};
  auto& free_set = free_list_map_[op.src];
  if (free_set.empty()) return AllocReply{AllocReply::Kind::kNeedGrow, 0};
  std::uint32_t pos = *free_set.begin();  // minimum-first, deterministic
  free_set.erase(free_set.begin());
  positions.emplace(op.dst, pos);
  return AllocReply{AllocReply::Kind::kAllocatedAt, pos};
}

FreeReply PimModule::edge_free(const EdgeFreeOp& op) {
  auto src_it = elem_position_map_.find(op.src);
  if (src_it == elem_position_map_.end()) return FreeReply{false, 0};
  auto it = src_it->second.find(op.dst);
  if (it == src_it->second.end()) return FreeReply{false, 0};
  std::uint32_t pos = it->second;
  src_it->second.erase(it);
  free_list_map_[op.src].insert(pos);
  return FreeReply{true, pos};
}

const std::vector<NodeId>* PimModule::adjacency_of(NodeId node) const {
  auto it = adjacency_.find(node);
  return it == adjacency_.end() ? nullptr : &it->second;
}

const std::unordered_map<NodeId, std::uint32_t>* PimModule::shard_positions(NodeId src) const {
  auto it = elem_position_map_.find(src);
  return it == elem_position_map_.end() ? nullptr : &it->second;
}

const std::set<std::uint32_t>* PimModule::shard_free_list(NodeId src) const {
  auto it = free_list_map_.find(src);
  return it == free_list_map_.end() ? nullptr : &it->second;
}

std::uint64_t PimModule::estimated_bytes() const {
  // Hash-map entry overhead is approximated at 48 bytes (bucket pointer,
  // key, vector header); ids are 8 bytes each.
  std::uint64_t bytes = 0;
  for (const auto& [node, hops] : adjacency_) bytes += 48 + 8 * hops.size();
  for (const auto& [src, positions] : elem_position_map_) bytes += 48 + 16 * positions.size();
  for (const auto& [src, free_set] : free_list_map_) bytes += 48 + 16 * free_set.size();
  return bytes;
}

}  // namespace moctopus
