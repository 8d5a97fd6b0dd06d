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

// Command-line harness: loads or generates a graph, runs query/update
// experiments under the moctopus or hash partitioning scheme, and emits one
// machine-readable key/value report per run (stable key order, so two runs
// with the same seed are byte-identical apart from wall_ms lines).

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "moctopus/experiment.hpp"
#include "moctopus/kernels.hpp"

namespace {

using namespace moctopus;

struct CliOptions {
  std::string input_path;
  std::string generator_spec;
  std::string partitioner = "moctopus";
  std::uint32_t modules = 64;
  std::uint32_t k = 3;
  std::uint32_t batch_size = 1024;
  std::uint64_t seed = 1;
  std::uint32_t degree_threshold = 16;
  double capacity_factor = 1.05;
  double mispartition_fraction = 0.0;
  std::string out_path;
  std::string simd = "auto";
};

void add_common_options(CLI::App* cmd, CliOptions& opts, bool with_partitioner) {
  auto* input = cmd->add_option("--input", opts.input_path, "SNAP edge-list file");
  auto* gen = cmd->add_option("--gen", opts.generator_spec,
                              "synthetic graph: community:c,n,d,p | powerlaw:n,m");
  input->excludes(gen);
  gen->excludes(input);
  if (with_partitioner)
    cmd->add_option("--partitioner", opts.partitioner, "moctopus | hash")
        ->check(CLI::IsMember({"moctopus", "hash"}));
  cmd->add_option("--modules", opts.modules, "PIM module count")->check(CLI::PositiveNumber);
  cmd->add_option("--k", opts.k, "hop count")->check(CLI::PositiveNumber);
  cmd->add_option("--batch-size", opts.batch_size, "queries (or update events) per batch");
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_option("--degree-threshold", opts.degree_threshold,
                  "out-degree above which a node moves to the host");
  cmd->add_option("--capacity-factor", opts.capacity_factor,
                  "per-module load ceiling vs. average");
  cmd->add_option("--mispartition-frac", opts.mispartition_fraction,
                  "probability of forcing a new node through the hash fallback");
  cmd->add_option("--out", opts.out_path, "write the report here instead of stdout");
  cmd->add_option("--simd", opts.simd, "kernel backend: auto | scalar | avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

ExperimentConfig make_config(const CliOptions& opts) {
  ExperimentConfig config;
  config.partitioner =
      opts.partitioner == "hash" ? PartitionMode::kHash : PartitionMode::kMoctopus;
  config.modules = opts.modules;
  config.k = opts.k;
  config.batch_size = opts.batch_size;
  config.seed = opts.seed;
  config.degree_threshold = opts.degree_threshold;
  config.capacity_factor = opts.capacity_factor;
  config.mispartition_fraction = opts.mispartition_fraction;
  if (!opts.input_path.empty())
    config.source = GraphSource::from_file(opts.input_path);
  else if (!opts.generator_spec.empty())
    config.source = GraphSource::from_generator_spec(opts.generator_spec);
  else
    throw ContractViolation("one of --input or --gen is required");
  return config;
}

void apply_simd_choice(const std::string& simd) {
  if (simd == "scalar") {
    kernels::set_backend(kernels::Backend::kScalar);
  } else if (simd == "avx2") {
    if (!kernels::set_backend(kernels::Backend::kAvx2))
      throw ContractViolation("--simd avx2: not supported on this CPU/build");
  }
}

void emit(const CliOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path);
  if (!out) throw std::runtime_error("cannot write output file: " + opts.out_path);
  out << text;
}

std::uint64_t now_ms() {
  using namespace std::chrono;
  return std::uint64_t(duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count());
}

int run_query(const CliOptions& opts) {
  ExperimentConfig config = make_config(opts);
  ExperimentResult result = run_experiment(config);
  std::ostringstream text;
  KvWriter w(text);
  render_experiment(w, "experiment", config, result);
  emit(opts, text.str());
  return 0;
}

int run_compare(const CliOptions& opts) {
  ExperimentConfig config = make_config(opts);
  std::vector<Edge> edges = config.source.load_edges(config.seed);

  ExperimentConfig moctopus_config = config;
  moctopus_config.partitioner = PartitionMode::kMoctopus;
  ExperimentConfig hash_config = config;
  hash_config.partitioner = PartitionMode::kHash;

  ExperimentResult moctopus_result = run_experiment(moctopus_config, edges);
  ExperimentResult hash_result = run_experiment(hash_config, edges);

  std::ostringstream text;
  KvWriter w(text);
  w.open("compare");
  render_experiment(w, "moctopus", moctopus_config, moctopus_result);
  render_experiment(w, "hash", hash_config, hash_result);
  w.open("summary");
  w.item("checksum_match",
         moctopus_result.result_checksum == hash_result.result_checksum);
  w.item("ipc_bytes_pass1_moctopus", moctopus_result.pass1.ipc_bytes);
  w.item("ipc_bytes_pass1_hash", hash_result.pass1.ipc_bytes);
  w.item("ipc_ratio_pass1", hash_result.pass1.ipc_bytes == 0
                                ? 0.0
                                : double(moctopus_result.pass1.ipc_bytes) /
                                      double(hash_result.pass1.ipc_bytes));
  w.item("ipc_ratio_pass2", hash_result.pass2.ipc_bytes == 0
                                ? 0.0
                                : double(moctopus_result.pass2.ipc_bytes) /
                                      double(hash_result.pass2.ipc_bytes));
  w.item("lookup_ratio_moctopus", moctopus_result.pass1.max_over_avg_lookup_ratio);
  w.item("lookup_ratio_hash", hash_result.pass1.max_over_avg_lookup_ratio);
  w.close();
  w.close();
  emit(opts, text.str());
  return 0;
}

int run_update(const CliOptions& opts) {
  ExperimentConfig config = make_config(opts);
  std::vector<Edge> edges = config.source.load_edges(config.seed);

  System system(config.fabric_config(), config.partitioner_config(), config.partitioner);

  std::set<std::pair<NodeId, NodeId>> present;
  std::vector<EdgeEvent> ingest;
  ingest.reserve(edges.size());
  for (const Edge& e : edges) {
    ingest.push_back(EdgeEvent{EventKind::kInsert, e});
    present.emplace(e.src, e.dst);
  }
  const CostLedger ingest_before = system.fabric().ledger();
  std::uint64_t inserted = 0, duplicates = 0;
  for (UpdateStatus s : system.process_update_batch(ingest))
    (s == UpdateStatus::kInserted ? inserted : duplicates) += 1;
  const std::uint64_t ingest_cpc =
      system.fabric().ledger().delta_since(ingest_before).cpc_bytes;

  // Fresh random edges over the known universe: insert them all, then
  // delete the same batch.
  std::vector<NodeId> ids = system.partitioner().known_node_ids_sorted();
  if (ids.size() < 2) throw ContractViolation("update: graph too small for an update workload");
  kernels::SplitMix64 rng(kernels::mix64(config.seed) ^ 0x75706461746573ull);
  std::vector<EdgeEvent> inserts;
  std::uint64_t rejections = 0;
  while (inserts.size() < config.batch_size) {
    NodeId u = ids[rng.next_below(ids.size())];
    NodeId v = ids[rng.next_below(ids.size())];
    if (!present.emplace(u, v).second) {
      if (++rejections > 100ull * config.batch_size + 1000)
        throw ContractViolation("update: graph too dense to sample fresh edges");
      continue;
    }
    inserts.push_back(EdgeEvent{EventKind::kInsert, Edge{u, v}});
  }
  std::vector<EdgeEvent> deletes;
  deletes.reserve(inserts.size());
  for (const EdgeEvent& e : inserts) deletes.push_back(EdgeEvent{EventKind::kDelete, e.edge});

  const CostLedger insert_before = system.fabric().ledger();
  const std::uint64_t t0 = now_ms();
  std::uint64_t batch_inserted = 0, batch_duplicates = 0;
  for (UpdateStatus s : system.process_update_batch(inserts))
    (s == UpdateStatus::kInserted ? batch_inserted : batch_duplicates) += 1;
  const std::uint64_t t1 = now_ms();
  const std::uint64_t insert_cpc =
      system.fabric().ledger().delta_since(insert_before).cpc_bytes;

  const CostLedger delete_before = system.fabric().ledger();
  const std::uint64_t t2 = now_ms();
  std::uint64_t removed = 0, notfound = 0;
  for (UpdateStatus s : system.process_update_batch(deletes))
    (s == UpdateStatus::kRemoved ? removed : notfound) += 1;
  const std::uint64_t t3 = now_ms();
  const std::uint64_t delete_cpc =
      system.fabric().ledger().delta_since(delete_before).cpc_bytes;

  std::ostringstream text;
  KvWriter w(text);
  w.open("update_experiment");
  w.open("config");
  w.item("partitioner", partition_mode_name(config.partitioner));
  w.item("modules", std::uint64_t(config.modules));
  w.item("batch_size", std::uint64_t(config.batch_size));
  w.item("seed", config.seed);
  w.item("degree_threshold", std::uint64_t(config.degree_threshold));
  w.item("capacity_factor", config.capacity_factor);
  w.item("input", config.source.describe());
  w.close();
  w.open("ingest");
  w.item("events", std::uint64_t(ingest.size()));
  w.item("inserted", inserted);
  w.item("duplicates", duplicates);
  w.item("nodes", std::uint64_t(system.partitioner().known_nodes()));
  w.item("host_resident", std::uint64_t(system.host_store().resident_count()));
  w.item("promotions", system.promotions());
  w.item("cpc_bytes", ingest_cpc);
  w.close();
  w.open("insert_batch");
  w.item("events", std::uint64_t(inserts.size()));
  w.item("inserted", batch_inserted);
  w.item("duplicates", batch_duplicates);
  w.item("cpc_bytes", insert_cpc);
  w.item("wall_ms", t1 - t0);
  w.close();
  w.open("delete_batch");
  w.item("events", std::uint64_t(deletes.size()));
  w.item("removed", removed);
  w.item("notfound", notfound);
  w.item("cpc_bytes", delete_cpc);
  w.item("wall_ms", t3 - t2);
  w.close();
  w.close();
  emit(opts, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moctopus-sim: a desk-scale PIM graph store simulator"};
  app.require_subcommand(1);

  CliOptions opts;
  CLI::App* query = app.add_subcommand("query", "ingest a graph and run a k-hop query batch");
  add_common_options(query, opts, /*with_partitioner=*/true);
  CLI::App* update = app.add_subcommand("update", "ingest a graph and run an update workload");
  add_common_options(update, opts, /*with_partitioner=*/true);
  CLI::App* compare =
      app.add_subcommand("compare", "run the same experiment under both partitioners");
  add_common_options(compare, opts, /*with_partitioner=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    apply_simd_choice(opts.simd);
    if (app.got_subcommand(query)) return run_query(opts);
    if (app.got_subcommand(update)) return run_update(opts);
    return run_compare(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
