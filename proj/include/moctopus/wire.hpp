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
#include <variant>
#include <vector>

#include "moctopus/common.hpp"

// Operator payloads exchanged between the host coordinator and PIM modules.
// The traffic model is fixed: every message costs header_bytes plus id_width
// per NodeId it carries. Statuses, counters, and slot positions ride in the
// header; only NodeIds are metered. The same model applies to every
// partitioning scheme so cost comparisons stay fair.

namespace moctopus {

struct FrontierEntry {
  std::uint32_t query = 0;
  NodeId node = 0;
  friend bool operator==(const FrontierEntry&, const FrontierEntry&) = default;
};

/// Path-matching step: expand each frontier entry through the module's
/// local adjacency. With detect set, the module also reports nodes whose
/// next-hops mostly live elsewhere (mispartition candidates).
struct SmxmOp {
  std::vector<FrontierEntry> frontier;
  bool detect = false;
};

struct AddOp {
  NodeId src = 0, dst = 0;
};
struct SubOp {
  NodeId src = 0, dst = 0;
};
struct FetchAdjOp {
  NodeId node = 0;
};
struct MigrateOutOp {
  NodeId node = 0;
};
struct MigrateInOp {
  NodeId node = 0;
  std::vector<NodeId> next_hops;
};

struct EdgeCheckAllocOp {
  NodeId src = 0, dst = 0;
};
struct EdgeFreeOp {
  NodeId src = 0, dst = 0;
};
struct ExtendFreeOp {
  NodeId src = 0;
  std::vector<std::uint32_t> positions;
};
/// Bulk shard setup on promotion: next_hops[i] occupies slot i, the rest of
/// [0, capacity) starts free.
struct ShardInitOp {
  NodeId src = 0;
  std::vector<NodeId> next_hops;
  std::uint32_t capacity = 0;
};

using OperatorRequest = std::variant<SmxmOp, AddOp, SubOp, FetchAdjOp, MigrateOutOp, MigrateInOp,
                                     EdgeCheckAllocOp, EdgeFreeOp, ExtendFreeOp, ShardInitOp>;

struct SmxmHit {
  std::uint32_t query = 0;
  std::vector<NodeId> next_hops;
};

/// Mispartition candidate seen during smxm: how many of the node's
/// next-hops were found in the replying module's own storage.
struct DetectionReport {
  NodeId node = 0;
  std::uint32_t local_hits = 0;
  std::uint32_t pim_resident_degree = 0;
};

struct SmxmReply {
  std::vector<SmxmHit> hits;  // one per frontier entry, in request order
  std::vector<DetectionReport> reports;
};

enum class AddResult : std::uint8_t { kInserted, kDuplicate };
enum class SubResult : std::uint8_t { kRemoved, kNotFound };

struct AdjacencyReply {
  std::vector<NodeId> next_hops;
};
struct AckReply {};

struct AllocReply {
  enum class Kind : std::uint8_t { kExistsAt, kAllocatedAt, kNeedGrow };
  Kind kind = Kind::kNeedGrow;
  std::uint32_t pos = 0;
};

struct FreeReply {
  bool found = false;
  std::uint32_t pos = 0;
};

using OperatorReply =
    std::variant<SmxmReply, AddResult, SubResult, AdjacencyReply, AckReply, AllocReply, FreeReply>;

/// Number of NodeIds a message carries on the wire (the metered payload).
std::uint64_t wire_id_count(const OperatorRequest& request);
std::uint64_t wire_id_count(const OperatorReply& reply);

}  // namespace moctopus
