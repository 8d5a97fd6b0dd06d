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

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "moctopus/experiment.hpp"

using namespace moctopus;

namespace {

ExperimentConfig small_config(PartitionMode mode) {
  ExperimentConfig config;
  config.partitioner = mode;
  config.modules = 8;
  config.k = 2;
  config.batch_size = 64;
  config.seed = 17;
  config.source = GraphSource::from_generator_spec("community:8,60,4,0.9");
  return config;
}

std::string render(const ExperimentConfig& config, const ExperimentResult& result) {
  std::ostringstream out;
  KvWriter writer(out);
  render_experiment(writer, "experiment", config, result);
  return out.str();
}

std::string strip_wall(std::string text) {
  return std::regex_replace(text, std::regex(" *wall_ms: \\d+\n"), "");
}

}  // namespace

TEST_CASE("generator spec parsing") {
  auto community = GraphSource::from_generator_spec("community:64,500,8,0.95");
  CHECK(community.kind == GraphSource::Kind::kCommunity);
  CHECK(community.communities == 64);
  CHECK(community.nodes_each == 500);
  CHECK(community.out_degree == 8);
  CHECK(community.p_intra == doctest::Approx(0.95));
  CHECK(community.describe() == "community:64,500,8,0.950000");

  auto powerlaw = GraphSource::from_generator_spec("powerlaw:10000,4");
  CHECK(powerlaw.kind == GraphSource::Kind::kPowerlaw);
  CHECK(powerlaw.powerlaw_nodes == 10000);
  CHECK(powerlaw.powerlaw_edges_per_node == 4);

  CHECK_THROWS_AS(GraphSource::from_generator_spec("community:64,500"), ContractViolation);
  CHECK_THROWS_AS(GraphSource::from_generator_spec("powerlaw:x,4"), ContractViolation);
  CHECK_THROWS_AS(GraphSource::from_generator_spec("ring:12"), ContractViolation);
}

TEST_CASE("file sources surface parse context") {
  const char* path = "experiment_bad_input.txt";
  {
    std::ofstream out(path);
    out << "# ok\n1 2\nbroken line here x\n";
  }
  auto source = GraphSource::from_file(path);
  try {
    source.load_edges(1);
    FAIL("expected a parse failure");
  } catch (const std::exception& e) {
    std::string message = e.what();
    CHECK(message.find(path) != std::string::npos);
    CHECK(message.find("line 3") != std::string::npos);
  }
  std::remove(path);
}

TEST_CASE("checksums agree across partitioners and module counts") {
  std::uint64_t reference = 0;
  bool first = true;
  for (PartitionMode mode : {PartitionMode::kMoctopus, PartitionMode::kHash}) {
    for (std::uint32_t modules : {4u, 8u, 32u}) {
      ExperimentConfig config = small_config(mode);
      config.modules = modules;
      ExperimentResult result = run_experiment(config);
      CHECK(result.pass1.result_checksum == result.pass2.result_checksum);
      if (first) {
        reference = result.result_checksum;
        first = false;
      } else {
        CHECK(result.result_checksum == reference);
      }
    }
  }
}

TEST_CASE("rendered reports are deterministic modulo wall_ms") {
  ExperimentConfig config = small_config(PartitionMode::kMoctopus);
  auto a = run_experiment(config);
  auto b = run_experiment(config);
  CHECK(strip_wall(render(config, a)) == strip_wall(render(config, b)));
}

TEST_CASE("ingest accounting adds up") {
  ExperimentConfig config = small_config(PartitionMode::kMoctopus);
  auto edges = config.source.load_edges(config.seed);
  ExperimentResult result = run_experiment(config, edges);
  CHECK(result.events == edges.size());
  CHECK(result.inserted + result.duplicates == result.events);
  CHECK(result.nodes_known == 8 * 60);
  CHECK(result.host_resident == result.promotions);
  // Community degree 4 stays under the threshold: nothing promotes.
  CHECK(result.promotions == 0);
  // The migration pass between the passes never makes forwarding worse.
  CHECK(result.pass2.ipc_bytes <= result.pass1.ipc_bytes);
}

TEST_CASE("kv writer output shape") {
  std::ostringstream out;
  KvWriter w(out);
  w.open("root");
  w.item("count", std::uint64_t(3));
  w.item("ratio", 0.5);
  w.item("name", "abc");
  w.item("flag", true);
  w.item_hex("digest", 0xabcull);
  std::vector<std::uint64_t> values = {1, 2, 3};
  w.item("values", std::span<const std::uint64_t>(values));
  w.open("nested");
  w.item("inner", std::uint64_t(1));
  w.close();
  w.close();
  CHECK(out.str() ==
        "root:\n"
        "  count: 3\n"
        "  ratio: 0.500000\n"
        "  name: abc\n"
        "  flag: true\n"
        "  digest: 0x0000000000000abc\n"
        "  values: [1, 2, 3]\n"
        "  nested:\n"
        "    inner: 1\n");
}
