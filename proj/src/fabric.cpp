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
#include "moctopus/fabric.hpp"

#include <algorithm>
#include <exception>

namespace moctopus {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::uint64_t wire_id_count(const OperatorRequest& request) {
  return std::visit(
      Overloaded{
          [](const SmxmOp& op) -> std::uint64_t { return op.frontier.size(); },
          [](const AddOp&) -> std::uint64_t { return 2; },
          [](const SubOp&) -> std::uint64_t { return 2; },
          [](const FetchAdjOp&) -> std::uint64_t { return 1; },
          [](const MigrateOutOp&) -> std::uint64_t { return 1; },
          [](const MigrateInOp& op) -> std::uint64_t { return 1 + op.next_hops.size(); },
          [](const EdgeCheckAllocOp&) -> std::uint64_t { return 2; },
          [](const EdgeFreeOp&) -> std::uint64_t { return 2; },
          [](const ExtendFreeOp&) -> std::uint64_t { return 1; },  // slot indexes are not ids
          [](const ShardInitOp& op) -> std::uint64_t { return 1 + op.next_hops.size(); },
      },
      request);
}

std::uint64_t wire_id_count(const OperatorReply& reply) {
  return std::visit(
      Overloaded{
          [](const SmxmReply& r) -> std::uint64_t {
            std::uint64_t ids = r.reports.size();  // one node id per report
            for (const SmxmHit& hit : r.hits) ids += hit.next_hops.size();
            return ids;
          },
          [](const AdjacencyReply& r) -> std::uint64_t { return r.next_hops.size(); },
          [](const auto&) -> std::uint64_t { return 0; },  // statuses and positions
      },
      reply);
}

CostLedger CostLedger::delta_since(const CostLedger& earlier) const {
  CostLedger d;
  d.cpc_bytes = cpc_bytes - earlier.cpc_bytes;
  d.ipc_bytes = ipc_bytes - earlier.ipc_bytes;
  d.host_lookups = host_lookups - earlier.host_lookups;
  d.intra_lookups.resize(intra_lookups.size());
  for (std::size_t i = 0; i < intra_lookups.size(); ++i) {
    std::uint64_t before = i < earlier.intra_lookups.size() ? earlier.intra_lookups[i] : 0;
    d.intra_lookups[i] = intra_lookups[i] - before;
  }
  return d;
}

std::uint64_t CostLedger::intra_total() const {
  std::uint64_t total = 0;
  for (std::uint64_t v : intra_lookups) total += v;
  return total;
}

std::uint64_t CostLedger::intra_max() const {
  std::uint64_t max = 0;
  for (std::uint64_t v : intra_lookups) max = std::max(max, v);
  return max;
}

Fabric::Fabric(FabricConfig config) : config_(config), modules_(config.module_count) {
  if (config_.module_count < 1) throw ContractViolation("fabric: module_count must be >= 1");
  if (config_.module_memory_budget == 0)
    throw ContractViolation("fabric: module_memory_budget must be > 0");
  ledger_.intra_lookups.assign(config_.module_count, 0);
}

std::uint64_t Fabric::message_bytes(std::uint64_t id_count) const {
  return config_.header_bytes + id_count * config_.id_width;
}

OperatorReply Fabric::dispatch(std::uint32_t target, const OperatorRequest& request) {
  if (target >= config_.module_count) throw ContractViolation("dispatch: target out of range");
  ledger_.cpc_bytes += message_bytes(wire_id_count(request));
  if (const auto* smxm = std::get_if<SmxmOp>(&request))
    ledger_.intra_lookups[target] += smxm->frontier.size();
  OperatorReply reply = modules_[target].handle(request);
  ledger_.cpc_bytes += message_bytes(wire_id_count(reply));
  return reply;
}

void Fabric::forward(std::uint32_t src, std::uint32_t dst, std::uint64_t id_count) {
  if (src >= config_.module_count || dst >= config_.module_count)
    throw ContractViolation("forward: module out of range");
  if (src == dst) throw ContractViolation("forward: local hits must not be forwarded");
  std::uint64_t bytes = message_bytes(id_count);
  ledger_.ipc_bytes += bytes;
  ledger_.cpc_bytes += 2 * bytes;  // module->host and host->module legs
}

std::map<std::uint32_t, OperatorReply> Fabric::parallel_round(
    const std::map<std::uint32_t, OperatorRequest>& ops) {
  for (const auto& [target, request] : ops)
    if (target >= config_.module_count)
      throw ContractViolation("parallel_round: target out of range");

  std::map<std::uint32_t, OperatorReply> replies;
  std::exception_ptr first_error;
  for (const auto& [target, request] : ops) {
    try {
      replies.emplace(target, dispatch(target, request));
    } catch (...) {
      // Barrier semantics: keep executing the rest of the round so its cost
      // accounting completes, then surface the lowest-module error.
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return replies;
}

const PimModule& Fabric::module(std::uint32_t id) const {
  if (id >= config_.module_count) throw ContractViolation("module: id out of range");
  return modules_[id];
}

std::vector<std::uint32_t> Fabric::modules_over_budget() const {
  std::vector<std::uint32_t> over;
  for (std::uint32_t m = 0; m < config_.module_count; ++m)
    if (modules_[m].estimated_bytes() > config_.module_memory_budget) over.push_back(m);
  return over;
}

}  // namespace moctopus
