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

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "moctopus/common.hpp"

namespace moctopus {

/// Parses SNAP-style edge-list text: '#' lines are comments, every other
/// line contributes one edge from its first two whitespace-separated
/// non-negative integer tokens. Order and duplicates are preserved;
/// deduplication happens at insertion time, not here.
std::vector<Edge> parse_snap_edgelist(std::istream& in);
std::vector<Edge> parse_snap_edgelist(std::string_view text);

/// Writes "src dst" lines; parse(serialize(edges)) == edges.
void serialize_edgelist(std::span<const Edge> edges, std::ostream& out);

/// Brute-force k-hop reference: for each source, the exact set of nodes
/// reachable by a directed walk of length exactly k. Builds its own
/// adjacency from the raw edge list and shares nothing with the simulator;
/// every correctness test checks against this.
/// Returned sets are sorted ascending. k must be >= 1.
std::vector<std::vector<NodeId>> khop_oracle(std::span<const Edge> edges,
                                             std::span<const NodeId> sources, std::uint32_t k);

}  // namespace moctopus
