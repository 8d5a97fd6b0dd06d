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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "moctopus/graph.hpp"
#include "moctopus/kernels.hpp"
#include "moctopus/system.hpp"

using namespace moctopus;

namespace {

System make_system(std::uint32_t modules = 4, PartitionMode mode = PartitionMode::kMoctopus,
                   PartitionerConfig partitioner_config = {}) {
  FabricConfig fabric_config;
  fabric_config.module_count = modules;
  return System(fabric_config, partitioner_config, mode);
}

std::vector<EdgeEvent> inserts(std::span<const Edge> edges) {
  std::vector<EdgeEvent> events;
  events.reserve(edges.size());
  for (const Edge& e : edges) events.push_back(EdgeEvent{EventKind::kInsert, e});
  return events;
}

void ingest(System& system, std::span<const Edge> edges) {
  system.process_update_batch(inserts(edges));
}

std::vector<Edge> random_edges(std::uint64_t seed, std::size_t count, NodeId universe) {
  kernels::SplitMix64 rng(seed);
  std::vector<Edge> edges;
  edges.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    edges.push_back(Edge{rng.next_below(universe), rng.next_below(universe)});
  return edges;
}

}  // namespace

TEST_CASE("compile_khop validates the hop count") {
  QueryBatch batch{{1, 2, 3}};
  CHECK_THROWS_AS(compile_khop(batch, 0), ContractViolation);
  CHECK(compile_khop(batch, 1).hops == 1);
  CHECK(compile_khop(batch, 2).hops == 2);
  CHECK(compile_khop(batch, 8).hops == 8);
}

TEST_CASE("two-hop path query") {
  auto system = make_system();
  std::vector<Edge> edges = {{0, 1}, {1, 2}};
  ingest(system, edges);

  auto outcome = system.run_query_batch(QueryBatch{{0}}, 2);
  REQUIRE(outcome.answers.size() == 1);
  CHECK(outcome.answers[0] == std::vector<NodeId>{2});
}

TEST_CASE("long-path query walks exactly k edges") {
  auto system = make_system(4);
  std::vector<Edge> path;
  for (NodeId u = 0; u < 11; ++u) path.push_back(Edge{u, u + 1});
  ingest(system, path);

  auto outcome = system.run_query_batch(QueryBatch{{0, 3}}, 8);
  REQUIRE(outcome.answers.size() == 2);
  CHECK(outcome.answers[0] == std::vector<NodeId>{8});
  CHECK(outcome.answers[1] == std::vector<NodeId>{11});
  CHECK(outcome.answers == khop_oracle(path, std::vector<NodeId>{0, 3}, 8));
}

TEST_CASE("identical source rows give identical answer rows") {
  auto system = make_system();
  auto edges = random_edges(11, 200, 40);
  ingest(system, edges);

  auto outcome = system.run_query_batch(QueryBatch{{7, 7, 7}}, 3);
  REQUIRE(outcome.answers.size() == 3);
  CHECK(outcome.answers[0] == outcome.answers[1]);
  CHECK(outcome.answers[1] == outcome.answers[2]);
}

TEST_CASE("engine matches the brute-force oracle on random graphs") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto edges = random_edges(seed * 101, 150 + seed * 40, 30 + seed * 10);
    QueryBatch batch;
    kernels::SplitMix64 rng(seed);
    for (int q = 0; q < 12; ++q) batch.sources.push_back(rng.next_below(30 + seed * 10 + 5));
    std::uint32_t k = 1 + std::uint32_t(seed % 4);

    auto expected = khop_oracle(edges, batch.sources, k);
    for (PartitionMode mode : {PartitionMode::kMoctopus, PartitionMode::kHash}) {
      auto system = make_system(seed % 2 ? 4 : 16, mode);
      ingest(system, edges);
      auto outcome = system.run_query_batch(batch, k);
      CHECK(outcome.answers == expected);
    }
  }
}

TEST_CASE("answers are partition transparent, only the ledger differs") {
  auto edges = random_edges(77, 400, 60);
  QueryBatch batch{{0, 5, 10, 59, 999}};  // 999 never appears: empty row

  std::vector<std::vector<NodeId>> reference;
  bool first = true;
  for (std::uint32_t modules : {2u, 8u, 64u}) {
    for (PartitionMode mode : {PartitionMode::kMoctopus, PartitionMode::kHash}) {
      auto system = make_system(modules, mode);
      ingest(system, edges);
      auto outcome = system.run_query_batch(batch, 3);
      if (first) {
        reference = outcome.answers;
        first = false;
      } else {
        CHECK(outcome.answers == reference);
      }
    }
  }
  CHECK(reference.back().empty());  // the unknown source
}

TEST_CASE("update statuses mirror storage effects") {
  auto system = make_system();
  std::vector<EdgeEvent> events = {
      {EventKind::kInsert, {1, 2}}, {EventKind::kInsert, {1, 2}},  // duplicate
      {EventKind::kDelete, {1, 2}}, {EventKind::kDelete, {1, 2}},  // second is gone
      {EventKind::kDelete, {42, 1}},                               // unknown source
  };
  auto statuses = system.process_update_batch(events);
  REQUIRE(statuses.size() == 5);
  CHECK(statuses[0] == UpdateStatus::kInserted);
  CHECK(statuses[1] == UpdateStatus::kDuplicate);
  CHECK(statuses[2] == UpdateStatus::kRemoved);
  CHECK(statuses[3] == UpdateStatus::kNotFound);
  CHECK(statuses[4] == UpdateStatus::kNotFound);
  CHECK(system.partitioner().out_degree(1) == 0);  // insert then delete
}

TEST_CASE("delete then reinsert restores query results") {
  auto edges = random_edges(5, 120, 25);
  auto never_deleted = make_system();
  ingest(never_deleted, edges);

  auto churned = make_system();
  ingest(churned, edges);
  std::vector<EdgeEvent> churn = {{EventKind::kDelete, edges[3]},
                                  {EventKind::kInsert, edges[3]}};
  churned.process_update_batch(churn);

  QueryBatch batch{{0, 3, 9, 24}};
  for (std::uint32_t k = 1; k <= 3; ++k)
    CHECK(churned.run_query_batch(batch, k).answers ==
          never_deleted.run_query_batch(batch, k).answers);
}

TEST_CASE("the seventeenth out-edge promotes a node with its edges intact") {
  auto system = make_system();
  std::vector<Edge> edges;
  for (NodeId v = 100; v < 117; ++v) edges.push_back(Edge{1, v});
  ingest(system, edges);

  CHECK(system.partitioner().location(1)->is_host());
  CHECK(system.host_store().is_resident(1));
  CHECK(system.promotions() == 1);
  CHECK(system.host_store().row(1)->occupied == 17);

  auto outcome = system.run_query_batch(QueryBatch{{1}}, 1);
  REQUIRE(outcome.answers.size() == 1);
  CHECK(outcome.answers[0].size() == 17);

  // Promoted rows keep serving updates through the shard protocol.
  auto statuses = system.process_update_batch(
      std::vector<EdgeEvent>{{EventKind::kInsert, {1, 117}}, {EventKind::kDelete, {1, 100}}});
  CHECK(statuses[0] == UpdateStatus::kInserted);
  CHECK(statuses[1] == UpdateStatus::kRemoved);
  CHECK(system.run_query_batch(QueryBatch{{1}}, 1).answers[0].size() == 17);
}

TEST_CASE("whole-batch interleavings replay like the oracle graph") {
  // Three update batches applied in order must answer like a from-scratch
  // graph holding exactly the surviving edges.
  auto system = make_system(8);
  auto batch_a = random_edges(21, 100, 20);
  auto batch_b = random_edges(22, 100, 20);

  system.process_update_batch(inserts(batch_a));
  std::vector<EdgeEvent> deletes;
  for (std::size_t i = 0; i < batch_a.size(); i += 2)
    deletes.push_back(EdgeEvent{EventKind::kDelete, batch_a[i]});
  system.process_update_batch(deletes);
  system.process_update_batch(inserts(batch_b));

  // Surviving edge multiset, replayed on the oracle's input format.
  std::vector<Edge> survivors;
  {
    std::set<std::pair<NodeId, NodeId>> live;
    for (const Edge& e : batch_a) live.emplace(e.src, e.dst);
    for (std::size_t i = 0; i < batch_a.size(); i += 2)
      live.erase({batch_a[i].src, batch_a[i].dst});
    for (const Edge& e : batch_b) live.emplace(e.src, e.dst);
    for (auto [u, v] : live) survivors.push_back(Edge{u, v});
  }

  QueryBatch query{{0, 1, 2, 3, 19}};
  for (std::uint32_t k : {1u, 2u, 4u})
    CHECK(system.run_query_batch(query, k).answers == khop_oracle(survivors, query.sources, k));
}

TEST_CASE("a round dispatches exactly the module-resident frontier") {
  auto system = make_system(4);
  auto edges = random_edges(31, 300, 50);
  ingest(system, edges);

  QueryBatch batch{{1, 2, 3, 4, 5, 6, 7, 8, 999}};
  std::uint64_t module_resident = 0;
  for (NodeId s : batch.sources) {
    auto loc = system.partitioner().location(s);
    if (loc && loc->is_module()) module_resident += 1;
  }

  const CostLedger before = system.fabric().ledger();
  system.run_query_batch(batch, 1);
  const CostLedger delta = system.fabric().ledger().delta_since(before);
  CHECK(delta.intra_total() == module_resident);
}

TEST_CASE("one applied move costs exactly the two transfer legs") {
  auto system = make_system(4);
  std::vector<Edge> edges;
  for (NodeId v = 100; v < 105; ++v) edges.push_back(Edge{10, v});
  ingest(system, edges);

  auto from_loc = *system.partitioner().location(10);
  REQUIRE(from_loc.is_module());
  const std::uint32_t from = from_loc.module_id();
  const std::uint32_t to = (from + 1) % 4;

  auto answers_before = system.run_query_batch(QueryBatch{{10}}, 1).answers;

  MigrationPlan plan;
  plan.moves.push_back(MigrationPlan::Move{10, from, to});
  MigrationHooks hooks{
      [&](NodeId node, std::uint32_t m) {
        return std::get<AdjacencyReply>(system.fabric().dispatch(m, MigrateOutOp{node}))
            .next_hops;
      },
      [&](NodeId node, std::uint32_t m, std::vector<NodeId> hops) {
        system.fabric().dispatch(m, MigrateInOp{node, std::move(hops)});
      },
  };

  const CostLedger before = system.fabric().ledger();
  CHECK(system.partitioner().apply_migration(plan, hooks) == 1);
  const CostLedger delta = system.fabric().ledger().delta_since(before);

  // migrate_out: (16+8) request + (16+40) reply; migrate_in: (16+48) + 16.
  CHECK(delta.cpc_bytes == 80 + 80);
  CHECK(delta.ipc_bytes == 0);
  CHECK(*system.partitioner().location(10) == PartitionLoc::module(to));

  // Moving a node never changes what queries see.
  CHECK(system.run_query_batch(QueryBatch{{10}}, 1).answers == answers_before);
  system.partitioner().audit();
}

TEST_CASE("detection reports accumulate only under the greedy partitioner") {
  auto edges = random_edges(41, 400, 60);
  QueryBatch batch{{0, 1, 2, 3, 4, 5}};

  auto greedy = make_system(8, PartitionMode::kMoctopus);
  ingest(greedy, edges);
  greedy.run_query_batch(batch, 3);
  CHECK(greedy.pending_report_count() > 0);
  auto outcome = greedy.run_migration_pass();
  CHECK(outcome.reports_considered > 0);
  CHECK(greedy.pending_report_count() == 0);  // consumed
  greedy.partitioner().audit();

  auto hashed = make_system(8, PartitionMode::kHash);
  ingest(hashed, edges);
  hashed.run_query_batch(batch, 3);
  CHECK(hashed.pending_report_count() == 0);
  auto noop = hashed.run_migration_pass();
  CHECK(noop.moves_applied == 0);
}
