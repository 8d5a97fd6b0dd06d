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
#include "moctopus/generators.hpp"

#include <algorithm>

#include "moctopus/kernels.hpp"

namespace moctopus {

std::vector<Edge> gen_community_graph(std::uint32_t communities, std::uint32_t nodes_each,
                                      std::uint32_t out_degree, double p_intra,
                                      std::uint64_t seed) {
  const std::uint64_t total = std::uint64_t(communities) * nodes_each;
  if (communities < 1 || nodes_each < 1)
    throw ContractViolation("gen_community_graph: empty node universe");
  if (total < std::uint64_t(out_degree) + 1)
    throw ContractViolation("gen_community_graph: not enough nodes for the requested degree");
  if (p_intra < 0.0 || p_intra > 1.0)
    throw ContractViolation("gen_community_graph: p_intra must be in [0, 1]");

  kernels::SplitMix64 rng(kernels::mix64(seed) ^ 0x636f6d6d756e6974ull);
  std::vector<Edge> edges;
  edges.reserve(total * out_degree);
  std::vector<NodeId> targets;
  targets.reserve(out_degree);

  // Communities arrive interleaved — one member of each per round — the way
  // parallel communities grow in real edge streams. Ids stay blocked per
  // community (community of u is u / nodes_each), and a member's offset
  // within its block is its arrival rank, so offsets below ours denote
  // members that already arrived. Intra-community draws prefer those
  // arrived members (new members attach to the existing community), which
  // is what gives the stream its locality.
  for (NodeId position = 0; position < total; ++position) {
    const NodeId offset = position / communities;
    const NodeId u = (position % communities) * nodes_each + offset;
    const NodeId community_base = (u / nodes_each) * nodes_each;
    targets.clear();
    while (targets.size() < out_degree) {
      bool intra = communities == 1 || rng.next_unit() < p_intra;
      bool arrived_only = intra && offset > 0;
      int attempts = 0;
      for (;;) {
        NodeId t;
        if (arrived_only) {
          t = community_base + rng.next_below(offset);
        } else if (intra) {
          t = community_base + rng.next_below(nodes_each);
        } else {
          // Uniform over the other communities: draw into a shrunk range
          // and skip past this community's block.
          NodeId r = rng.next_below(total - nodes_each);
          t = r < community_base ? r : r + nodes_each;
        }
        bool taken = t == u || std::find(targets.begin(), targets.end(), t) != targets.end();
        if (!taken) {
          targets.push_back(t);
          break;
        }
        ++attempts;
        // Few arrived members yet: widen to the whole community, and as a
        // last resort (tiny community) spill elsewhere.
        if (attempts > 16 && arrived_only) arrived_only = false;
        if (attempts > 80 && intra && communities > 1) intra = false;
      }
    }
    for (NodeId t : targets) edges.push_back(Edge{u, t});
  }
  return edges;
}

std::vector<Edge> gen_powerlaw_graph(std::uint64_t nodes, std::uint32_t edges_per_node,
                                     std::uint64_t seed) {
  if (edges_per_node < 1 || nodes <= edges_per_node)
    throw ContractViolation("gen_powerlaw_graph: need nodes > edges_per_node >= 1");

  kernels::SplitMix64 rng(kernels::mix64(seed) ^ 0x706f7765726c6177ull);
  std::vector<Edge> edges;
  edges.reserve(nodes * edges_per_node * 2);

  // Ball-in-urn attachment: each node enters the urn once on arrival (the
  // +1 smoothing) and twice per connection endpoint (each connection is
  // emitted in both directions, so it adds one in- plus one out-degree).
  std::vector<NodeId> urn;
  urn.reserve(nodes * (2 + 4ull * edges_per_node) / 2);
  std::vector<NodeId> targets;
  targets.reserve(edges_per_node);

  for (NodeId i = 0; i < nodes; ++i) {
    const std::uint32_t draw_count = std::uint32_t(std::min<std::uint64_t>(i, edges_per_node));
    targets.clear();
    while (targets.size() < draw_count) {
      NodeId t = urn[rng.next_below(urn.size())];
      if (std::find(targets.begin(), targets.end(), t) != targets.end()) {
        // Collision with an earlier draw: probe linearly over the arrived
        // nodes so termination never depends on urn luck.
        do t = (t + 1) % i;
        while (std::find(targets.begin(), targets.end(), t) != targets.end());
      }
      targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back(Edge{i, t});
      edges.push_back(Edge{t, i});
      urn.push_back(i);
      urn.push_back(i);
      urn.push_back(t);
      urn.push_back(t);
    }
    urn.push_back(i);
  }
  return edges;
}

}  // namespace moctopus
