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

#include "moctopus/kernels.hpp"
#include "moctopus/local_store.hpp"

using namespace moctopus;

namespace {

SmxmReply run_smxm(PimModule& module, std::vector<FrontierEntry> frontier, bool detect = false) {
  return std::get<SmxmReply>(module.handle(SmxmOp{std::move(frontier), detect}));
}

}  // namespace

TEST_CASE("add and sub") {
  PimModule module;

  CHECK(std::get<AddResult>(module.handle(AddOp{1, 2})) == AddResult::kInserted);
  CHECK(*module.adjacency_of(1) == std::vector<NodeId>{2});
  CHECK(std::get<AddResult>(module.handle(AddOp{1, 2})) == AddResult::kDuplicate);
  CHECK(*module.adjacency_of(1) == std::vector<NodeId>{2});
  CHECK(std::get<AddResult>(module.handle(AddOp{1, 1})) == AddResult::kInserted);  // self-loop

  module.handle(AddOp{5, 10});
  module.handle(AddOp{5, 11});
  module.handle(AddOp{5, 12});
  CHECK(std::get<SubResult>(module.handle(SubOp{5, 11})) == SubResult::kRemoved);
  CHECK(*module.adjacency_of(5) == std::vector<NodeId>{10, 12});  // order preserved
  CHECK(std::get<SubResult>(module.handle(SubOp{5, 11})) == SubResult::kNotFound);
  CHECK(std::get<SubResult>(module.handle(SubOp{99, 1})) == SubResult::kNotFound);
}

TEST_CASE("an emptied entry and a missing entry query identically") {
  // Three-node graph on one module built two ways: one where the middle
  // node's list was emptied by sub, one where it never had an entry.
  PimModule emptied;
  emptied.handle(AddOp{10, 20});
  emptied.handle(AddOp{20, 30});
  emptied.handle(SubOp{20, 30});

  PimModule absent;
  absent.handle(AddOp{10, 20});

  auto frontier = std::vector<FrontierEntry>{{0, 10}, {0, 20}, {0, 30}};
  auto r1 = run_smxm(emptied, frontier);
  auto r2 = run_smxm(absent, frontier);
  REQUIRE(r1.hits.size() == r2.hits.size());
  for (std::size_t i = 0; i < r1.hits.size(); ++i) {
    CHECK(r1.hits[i].query == r2.hits[i].query);
    CHECK(r1.hits[i].next_hops == r2.hits[i].next_hops);
  }
}

TEST_CASE("smxm hits and detection reports") {
  PimModule module;
  module.handle(AddOp{1, 2});
  module.handle(AddOp{1, 3});
  module.handle(AddOp{2, 9});
  module.handle(AddOp{3, 9});

  SUBCASE("fully local node produces no report") {
    auto reply = run_smxm(module, {{0, 1}}, true);
    REQUIRE(reply.hits.size() == 1);
    CHECK(reply.hits[0].next_hops == std::vector<NodeId>{2, 3});
    CHECK(reply.reports.empty());  // both next-hops are keys here
  }

  SUBCASE("node with no local next-hops reports zero hits") {
    PimModule lonely;
    lonely.handle(AddOp{7, 100});
    lonely.handle(AddOp{7, 101});
    lonely.handle(AddOp{7, 102});
    auto reply = run_smxm(lonely, {{0, 7}}, true);
    REQUIRE(reply.reports.size() == 1);
    CHECK(reply.reports[0].node == 7);
    CHECK(reply.reports[0].local_hits == 0);
    CHECK(reply.reports[0].pim_resident_degree == 3);
  }

  SUBCASE("empty frontier") {
    auto reply = run_smxm(module, {}, true);
    CHECK(reply.hits.empty());
    CHECK(reply.reports.empty());
  }

  SUBCASE("reports deduplicate per call; detect=false suppresses them") {
    auto reply = run_smxm(module, {{0, 2}, {1, 2}, {2, 2}}, true);
    CHECK(reply.hits.size() == 3);
    CHECK(reply.reports.size() == 1);  // node 2 touched three times, one report
    auto quiet = run_smxm(module, {{0, 2}}, false);
    CHECK(quiet.reports.empty());
  }

  SUBCASE("smxm never mutates") {
    auto before = *module.adjacency_of(1);
    run_smxm(module, {{0, 1}, {0, 2}, {0, 3}}, true);
    CHECK(*module.adjacency_of(1) == before);
    CHECK(module.resident_entries() == 3);
  }
}

TEST_CASE("add then sub restores observable query behavior") {
  kernels::SplitMix64 rng(4242);
  PimModule module;
  for (int i = 0; i < 200; ++i) module.handle(AddOp{rng.next_below(30), rng.next_below(30)});

  std::vector<FrontierEntry> everything;
  for (NodeId u = 0; u < 30; ++u) everything.push_back(FrontierEntry{std::uint32_t(u), u});
  auto baseline = run_smxm(module, everything);

  for (int trial = 0; trial < 50; ++trial) {
    NodeId u = rng.next_below(30);
    NodeId v = rng.next_below(30);
    if (std::get<AddResult>(module.handle(AddOp{u, v})) == AddResult::kInserted) {
      CHECK(std::get<SubResult>(module.handle(SubOp{u, v})) == SubResult::kRemoved);
    }
    auto now = run_smxm(module, everything);
    REQUIRE(now.hits.size() == baseline.hits.size());
    for (std::size_t i = 0; i < now.hits.size(); ++i)
      CHECK(now.hits[i].next_hops == baseline.hits[i].next_hops);
  }
}

TEST_CASE("fetch and migrate") {
  PimModule a;
  PimModule b;
  a.handle(AddOp{4, 8});
  a.handle(AddOp{4, 9});

  auto fetched = std::get<AdjacencyReply>(a.handle(FetchAdjOp{4}));
  CHECK(fetched.next_hops == std::vector<NodeId>{8, 9});
  CHECK(std::get<AdjacencyReply>(a.handle(FetchAdjOp{777})).next_hops.empty());

  auto moved = std::get<AdjacencyReply>(a.handle(MigrateOutOp{4}));
  CHECK(moved.next_hops == std::vector<NodeId>{8, 9});
  CHECK(!a.has_adjacency_key(4));
  b.handle(MigrateInOp{4, moved.next_hops});
  CHECK(*b.adjacency_of(4) == std::vector<NodeId>{8, 9});

  b.handle(MigrateInOp{5, {}});  // empty adjacency still becomes resident
  CHECK(b.has_adjacency_key(5));
  CHECK(b.adjacency_of(5)->empty());

  CHECK_THROWS_AS(b.handle(MigrateInOp{4, {1}}), ContractViolation);
}

TEST_CASE("shard alloc, free, extend") {
  PimModule module;
  module.handle(ShardInitOp{1, {7}, 4});  // slot 0 taken, free {1,2,3}

  SUBCASE("fresh edge takes the minimum free slot") {
    auto alloc = std::get<AllocReply>(module.handle(EdgeCheckAllocOp{1, 2}));
    CHECK(alloc.kind == AllocReply::Kind::kAllocatedAt);
    CHECK(alloc.pos == 1);
    CHECK(module.shard_positions(1)->at(2) == 1);

    auto again = std::get<AllocReply>(module.handle(EdgeCheckAllocOp{1, 2}));
    CHECK(again.kind == AllocReply::Kind::kExistsAt);
    CHECK(again.pos == 1);
  }

  SUBCASE("alloc then free round-trips the slot") {
    module.handle(EdgeCheckAllocOp{1, 2});
    auto freed = std::get<FreeReply>(module.handle(EdgeFreeOp{1, 2}));
    CHECK(freed.found);
    CHECK(freed.pos == 1);
    auto realloc = std::get<AllocReply>(module.handle(EdgeCheckAllocOp{1, 5}));
    CHECK(realloc.pos == 1);  // freed slot reused, minimum-first
  }

  SUBCASE("free of an absent edge is benign") {
    CHECK(!std::get<FreeReply>(module.handle(EdgeFreeOp{1, 123})).found);
    CHECK(!std::get<FreeReply>(module.handle(EdgeFreeOp{42, 1})).found);
  }

  SUBCASE("exhaustion asks for growth, growth extends the free range") {
    for (NodeId v : {2, 3, 4}) module.handle(EdgeCheckAllocOp{1, v});
    auto full = std::get<AllocReply>(module.handle(EdgeCheckAllocOp{1, 5}));
    CHECK(full.kind == AllocReply::Kind::kNeedGrow);
    CHECK(module.shard_positions(1)->size() == 4);  // NeedGrow mutated nothing

    module.handle(ExtendFreeOp{1, {4, 5, 6, 7}});
    auto alloc = std::get<AllocReply>(module.handle(EdgeCheckAllocOp{1, 5}));
    CHECK(alloc.kind == AllocReply::Kind::kAllocatedAt);
    CHECK(alloc.pos == 4);
  }

  CHECK_THROWS_AS(module.handle(ShardInitOp{1, {9}, 8}), ContractViolation);
}

TEST_CASE("shard slots always partition the capacity range") {
  PimModule module;
  std::uint32_t capacity = 8;
  module.handle(ShardInitOp{3, {100, 101}, capacity});
  kernels::SplitMix64 rng(31337);

  auto check_partition = [&] {
    const auto* used = module.shard_positions(3);
    const auto* free_set = module.shard_free_list(3);
    REQUIRE(used != nullptr);
    REQUIRE(free_set != nullptr);
    std::set<std::uint32_t> seen(free_set->begin(), free_set->end());
    CHECK(seen.size() == free_set->size());
    for (const auto& [dst, pos] : *used) CHECK(seen.insert(pos).second);  // disjoint
    REQUIRE(seen.size() == capacity);
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == capacity - 1);
  };

  for (int i = 0; i < 2000; ++i) {
    NodeId dst = 100 + rng.next_below(12);
    if (rng.next_below(2) == 0) {
      auto alloc = std::get<AllocReply>(module.handle(EdgeCheckAllocOp{3, dst}));
      if (alloc.kind == AllocReply::Kind::kNeedGrow) {
        std::vector<std::uint32_t> fresh;
        for (std::uint32_t p = capacity; p < capacity * 2; ++p) fresh.push_back(p);
        module.handle(ExtendFreeOp{3, fresh});
        capacity *= 2;
        module.handle(EdgeCheckAllocOp{3, dst});
      }
    } else {
      module.handle(EdgeFreeOp{3, dst});
    }
    check_partition();
  }
}
