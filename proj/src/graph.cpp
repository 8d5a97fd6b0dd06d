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
#include "moctopus/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace moctopus {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// Whole-token decimal parse; rejects anything that is not a plain
// non-negative integer below the sentinel.
bool parse_node_id(std::string_view token, NodeId& out) {
  if (token.empty()) return false;
  NodeId value = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
    NodeId digit = NodeId(c - '0');
    if (value > (kSentinelNode - digit) / 10) return false;  // overflow / sentinel
    value = value * 10 + digit;
  }
  if (value >= kSentinelNode) return false;
  out = value;
  return true;
}

void parse_line(std::string_view line, std::size_t line_number, std::vector<Edge>& edges) {
  std::size_t pos = 0;
  NodeId ids[2];
  for (int want = 0; want < 2; ++want) {
    while (pos < line.size() && is_space(line[pos])) ++pos;
    std::size_t start = pos;
    while (pos < line.size() && !is_space(line[pos])) ++pos;
    if (start == pos) throw ParseError(line_number, "expected two integer tokens");
    std::string_view token = line.substr(start, pos - start);
    if (!parse_node_id(token, ids[want]))
      throw ParseError(line_number, "bad node id token '" + std::string(token) + "'");
  }
  edges.push_back(Edge{ids[0], ids[1]});
}

}  // namespace

std::vector<Edge> parse_snap_edgelist(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.front() == '#') continue;
    parse_line(line, line_number, edges);
  }
  return edges;
}

std::vector<Edge> parse_snap_edgelist(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_snap_edgelist(in);
}

void serialize_edgelist(std::span<const Edge> edges, std::ostream& out) {
  for (const Edge& e : edges) out << e.src << ' ' << e.dst << '\n';
}

std::vector<std::vector<NodeId>> khop_oracle(std::span<const Edge> edges,
                                             std::span<const NodeId> sources, std::uint32_t k) {
  if (k == 0) throw ContractViolation("khop_oracle: k must be >= 1");

  std::unordered_map<NodeId, std::unordered_set<NodeId>> adjacency;
  for (const Edge& e : edges) adjacency[e.src].insert(e.dst);

  std::vector<std::vector<NodeId>> result;
  result.reserve(sources.size());
  for (NodeId source : sources) {
    std::unordered_set<NodeId> frontier{source};
    for (std::uint32_t hop = 0; hop < k; ++hop) {
      std::unordered_set<NodeId> next;
      for (NodeId u : frontier) {
        auto it = adjacency.find(u);
        if (it == adjacency.end()) continue;
        next.insert(it->second.begin(), it->second.end());
      }
      frontier = std::move(next);
    }
    std::vector<NodeId> sorted(frontier.begin(), frontier.end());
    std::sort(sorted.begin(), sorted.end());
    result.push_back(std::move(sorted));
  }
  return result;
}

}  // namespace moctopus
