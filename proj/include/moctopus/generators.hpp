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
#include <vector>

#include "moctopus/common.hpp"

namespace moctopus {

/// Community-structured stream: node ids [0, communities*nodes_each), one
/// community per contiguous id block. Every node draws out_degree distinct
/// targets, each inside its own community with probability p_intra and
/// uniformly elsewhere otherwise. Deterministic in the seed.
std::vector<Edge> gen_community_graph(std::uint32_t communities, std::uint32_t nodes_each,
                                      std::uint32_t out_degree, double p_intra,
                                      std::uint64_t seed);

/// Preferential-attachment stream: node i arrives in order and connects to
/// edges_per_node distinct earlier nodes drawn with probability
/// proportional to current in+out degree (smoothed by +1). Each connection
/// is emitted in both directions, so attachment hubs accumulate high
/// out-degree as well. Deterministic in the seed.
std::vector<Edge> gen_powerlaw_graph(std::uint64_t nodes, std::uint32_t edges_per_node,
                                     std::uint64_t seed);

}  // namespace moctopus
