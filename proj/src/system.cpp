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
#include "moctopus/system.hpp"

#include <algorithm>

namespace moctopus {

QueryPlan compile_khop(const QueryBatch&, std::uint32_t k) {
  if (k == 0) throw ContractViolation("compile_khop: k must be >= 1");
  return QueryPlan{k};
}

System::System(FabricConfig fabric_config, PartitionerConfig partitioner_config,
               PartitionMode mode)
    : fabric_(fabric_config),
      partitioner_(fabric_config.module_count, partitioner_config, mode),
      host_store_(fabric_) {}

AddResult System::route_add(NodeId u, NodeId v) {
  PartitionLoc loc = *partitioner_.location(u);
  if (loc.is_host()) return host_store_.insert_edge(u, v);
  return std::get<AddResult>(fabric_.dispatch(loc.module_id(), AddOp{u, v}));
}

SubResult System::route_sub(NodeId u, NodeId v) {
  PartitionLoc loc = *partitioner_.location(u);
  if (loc.is_host()) return host_store_.delete_edge(u, v);
  return std::get<SubResult>(fabric_.dispatch(loc.module_id(), SubOp{u, v}));
}

void System::promote(NodeId node) {
  PartitionLoc loc = *partitioner_.location(node);
  if (!loc.is_module()) return;  // stale action, already on the host
  auto reply = std::get<AdjacencyReply>(fabric_.dispatch(loc.module_id(), MigrateOutOp{node}));
  host_store_.promote_node(node, std::move(reply.next_hops));
  partitioner_.set_host(node);
  promotions_ += 1;
}

void System::run_actions(std::span<const PlacementAction> actions) {
  for (const PlacementAction& action : actions)
    if (action.kind == PlacementAction::Kind::kPromote) promote(action.node);
}

std::vector<UpdateStatus> System::process_update_batch(std::span<const EdgeEvent> events) {
  std::vector<UpdateStatus> statuses;
  statuses.reserve(events.size());
  for (const EdgeEvent& event : events) {
    const NodeId u = event.edge.src;
    const NodeId v = event.edge.dst;
    if (event.kind == EventKind::kInsert) {
      if (partitioner_.knows(u) && partitioner_.knows(v)) {
        // Both endpoints known: the edge may be a duplicate, and only
        // storage can tell. Duplicates must not touch degrees or emit
        // actions, so the storage probe goes first here.
        AddResult result = route_add(u, v);
        if (result == AddResult::kInserted) {
          auto actions = partitioner_.on_edge_inserted(u, v);
          run_actions(actions);
          statuses.push_back(UpdateStatus::kInserted);
        } else {
          statuses.push_back(UpdateStatus::kDuplicate);
        }
      } else {
        // At least one endpoint is new, so the edge cannot exist yet:
        // assign first (placement needs the stream position), then store,
        // then promote — a crossing node carries the new edge with it.
        auto actions = partitioner_.on_edge_inserted(u, v);
        if (route_add(u, v) != AddResult::kInserted)
          throw ProtocolError("insert: storage held an edge for an unknown endpoint");
        run_actions(actions);
        statuses.push_back(UpdateStatus::kInserted);
      }
    } else {
      if (!partitioner_.knows(u)) {
        statuses.push_back(UpdateStatus::kNotFound);
        continue;
      }
      SubResult result = route_sub(u, v);
      if (result == SubResult::kRemoved) {
        partitioner_.note_edge_removed(u);
        statuses.push_back(UpdateStatus::kRemoved);
      } else {
        statuses.push_back(UpdateStatus::kNotFound);
      }
    }
  }
  return statuses;
}

QueryOutcome System::execute(const QueryPlan& plan, const QueryBatch& batch) {
  if (plan.hops == 0) throw ContractViolation("execute: empty plan");
  const std::size_t query_count = batch.sources.size();
  const bool detect = partitioner_.mode() == PartitionMode::kMoctopus;

  std::vector<std::vector<NodeId>> frontier(query_count);
  for (std::size_t q = 0; q < query_count; ++q) frontier[q] = {batch.sources[q]};

  for (std::uint32_t hop = 0; hop < plan.hops; ++hop) {
    // Split the frontier by residency. Unknown nodes and the frontier of a
    // finished query contribute nothing.
    std::map<std::uint32_t, OperatorRequest> round_ops;
    std::vector<FrontierEntry> host_entries;
    for (std::size_t q = 0; q < query_count; ++q) {
      for (NodeId u : frontier[q]) {
        auto loc = partitioner_.location(u);
        if (!loc) continue;
        FrontierEntry entry{std::uint32_t(q), u};
        if (loc->is_host()) {
          host_entries.push_back(entry);
        } else {
          auto [it, inserted] = round_ops.try_emplace(loc->module_id(), SmxmOp{{}, detect});
          std::get<SmxmOp>(it->second).frontier.push_back(entry);
        }
      }
    }

    std::vector<std::vector<NodeId>> next(query_count);

    // Host rows are served locally: one contiguous scan, no forwarding.
    for (const FrontierEntry& entry : host_entries) {
      std::vector<NodeId> hops = host_store_.scan_next_hops(entry.node);
      auto& bucket = next[entry.query];
      bucket.insert(bucket.end(), hops.begin(), hops.end());
    }

    // One barrier round over all touched modules.
    auto replies = fabric_.parallel_round(round_ops);

    // mwait: gather, attribute forwarding, reduce. A module's returned ids
    // form one set per query (boolean semantics — expansion through several
    // frontier nodes of the same query yields each destination once), so
    // forwarding dedups within (replier, query) and is batched per
    // (replier, owner) pair for the round.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> forwards;
    std::map<std::uint32_t, std::vector<NodeId>> returned;  // per query, this module
    for (const auto& [module_id, reply] : replies) {
      const auto& smxm = std::get<SmxmReply>(reply);
      returned.clear();
      for (const SmxmHit& hit : smxm.hits) {
        auto& bucket = next[hit.query];
        bucket.insert(bucket.end(), hit.next_hops.begin(), hit.next_hops.end());
        auto& mine = returned[hit.query];
        mine.insert(mine.end(), hit.next_hops.begin(), hit.next_hops.end());
      }
      for (auto& [query, ids] : returned) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (NodeId v : ids) {
          auto owner = partitioner_.location(v);
          if (owner && owner->is_module() && owner->module_id() != module_id)
            forwards[{module_id, owner->module_id()}] += 1;
        }
      }
      if (detect)
        for (const DetectionReport& report : smxm.reports) pending_reports_[report.node] = report;
    }
    for (const auto& [route, count] : forwards) fabric_.forward(route.first, route.second, count);

    for (auto& bucket : next) {
      std::sort(bucket.begin(), bucket.end());
      bucket.erase(std::unique(bucket.begin(), bucket.end()), bucket.end());
    }
    frontier = std::move(next);
  }
  return QueryOutcome{std::move(frontier)};
}

MigrationOutcome System::run_migration_pass() {
  MigrationOutcome outcome;
  outcome.reports_considered = pending_reports_.size();
  std::vector<DetectionReport> reports;
  reports.reserve(pending_reports_.size());
  for (const auto& [node, report] : pending_reports_) reports.push_back(report);
  pending_reports_.clear();

  if (partitioner_.mode() != PartitionMode::kMoctopus || reports.empty()) return outcome;

  auto fetch = [this](NodeId node) {
    auto loc = partitioner_.location(node);
    auto reply = fabric_.dispatch(loc->module_id(), FetchAdjOp{node});
    return std::get<AdjacencyReply>(std::move(reply)).next_hops;
  };
  MigrationPlan plan = partitioner_.plan_migrations(reports, fetch);
  outcome.moves_planned = plan.moves.size();

  MigrationHooks hooks{
      .extract =
          [this](NodeId node, std::uint32_t from) {
            auto reply = fabric_.dispatch(from, MigrateOutOp{node});
            return std::get<AdjacencyReply>(std::move(reply)).next_hops;
          },
      .insert =
          [this](NodeId node, std::uint32_t to, std::vector<NodeId> hops) {
            fabric_.dispatch(to, MigrateInOp{node, std::move(hops)});
          },
  };
  outcome.moves_applied = partitioner_.apply_migration(plan, hooks);
  return outcome;
}

}  // namespace moctopus
