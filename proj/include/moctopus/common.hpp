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
#include <limits>
#include <stdexcept>
#include <string>

namespace moctopus {

using NodeId = std::uint64_t;

/// Reserved slot marker for host-side cols_vector storage. Never a valid
/// node id; the edge-list parser rejects it on input.
inline constexpr NodeId kSentinelNode = std::numeric_limits<NodeId>::max();

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class EventKind : std::uint8_t { kInsert, kDelete };

struct EdgeEvent {
  EventKind kind = EventKind::kInsert;
  Edge edge;
};

/// Host-side protocol bug: a handler received a message it cannot serve in
/// its current state (e.g. a grow request that keeps failing).
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("parse error at line " + std::to_string(line) + ": " + what),
        line_number(line) {}
  std::size_t line_number;
};

}  // namespace moctopus
