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
#include <map>
#include <vector>

#include "moctopus/common.hpp"
#include "moctopus/local_store.hpp"
#include "moctopus/wire.hpp"

namespace moctopus {

struct FabricConfig {
  std::uint32_t module_count = 64;
  std::uint64_t module_memory_budget = 64ull << 20;
  std::uint32_t id_width = 8;      // bytes per NodeId on the wire
  std::uint32_t header_bytes = 16; // per message
};

/// Where a node lives: on the host, or on one of the P modules.
class PartitionLoc {
 public:
  constexpr PartitionLoc() = default;
  static constexpr PartitionLoc host() { return PartitionLoc(kHostTag); }
  static constexpr PartitionLoc module(std::uint32_t id) { return PartitionLoc(id); }

  constexpr bool is_host() const { return tag_ == kHostTag; }
  constexpr bool is_module() const { return tag_ != kHostTag; }
  constexpr std::uint32_t module_id() const { return tag_; }

  friend constexpr bool operator==(PartitionLoc, PartitionLoc) = default;

 private:
  static constexpr std::uint32_t kHostTag = 0xffffffffu;
  constexpr explicit PartitionLoc(std::uint32_t tag) : tag_(tag) {}
  std::uint32_t tag_ = kHostTag;
};

/// Byte and lookup counters for the two communication channels. Counters
/// only ever grow within a run; module-to-module traffic (ipc) is realized
/// by host forwarding, so every ipc increment of b bytes is accompanied by
/// a cpc increment of 2b (the two host legs).
struct CostLedger {
  std::uint64_t cpc_bytes = 0;
  std::uint64_t ipc_bytes = 0;
  std::uint64_t host_lookups = 0;
  std::vector<std::uint64_t> intra_lookups;  // per module

  /// Counter-wise difference against an earlier snapshot of the same run.
  CostLedger delta_since(const CostLedger& earlier) const;
  std::uint64_t intra_total() const;
  std::uint64_t intra_max() const;
};

/// The simulated machine: P module slots behind a dispatch/forward message
/// interface, with the host coordinator owning the cost ledger. Module
/// execution in a round is independent per module and results never depend
/// on ordering; this implementation runs rounds in ascending module order,
/// which makes runs bit-reproducible.
class Fabric {
 public:
  explicit Fabric(FabricConfig config);

  /// Delivers one operator to a module and returns its reply. Charges
  /// cpc_bytes for both legs: header + id_width per NodeId carried, each
  /// way. smxm requests additionally charge one intra-module lookup per
  /// frontier entry.
  OperatorReply dispatch(std::uint32_t target, const OperatorRequest& request);

  /// Accounts a module->module transfer of id_count NodeIds (payload on
  /// ipc, both host legs on cpc). src == dst is a contract violation:
  /// local hits must not be forwarded.
  void forward(std::uint32_t src, std::uint32_t dst, std::uint64_t id_count);

  /// Dispatches every operator and waits for all replies (a barrier).
  /// Cost accounting is identical to per-op dispatch. A module error is
  /// re-thrown only after the whole round has executed, so the round's
  /// accounting is complete; the error from the lowest module id wins.
  std::map<std::uint32_t, OperatorReply> parallel_round(
      const std::map<std::uint32_t, OperatorRequest>& ops);

  const FabricConfig& config() const { return config_; }
  const CostLedger& ledger() const { return ledger_; }
  CostLedger& ledger() { return ledger_; }

  const PimModule& module(std::uint32_t id) const;

  /// Modules whose estimated storage footprint exceeds the memory budget.
  std::vector<std::uint32_t> modules_over_budget() const;

 private:
  std::uint64_t message_bytes(std::uint64_t id_count) const;

  FabricConfig config_;
  CostLedger ledger_;
  std::vector<PimModule> modules_;
};

}  // namespace moctopus
