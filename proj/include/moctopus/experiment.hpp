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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "moctopus/system.hpp"

namespace moctopus {

struct GraphSource {
  enum class Kind : std::uint8_t { kFile, kCommunity, kPowerlaw };
  Kind kind = Kind::kPowerlaw;

  std::string path;  // kFile

  std::uint32_t communities = 64;  // kCommunity
  std::uint32_t nodes_each = 500;
  std::uint32_t out_degree = 8;
  double p_intra = 0.95;

  std::uint64_t powerlaw_nodes = 10000;  // kPowerlaw
  std::uint32_t powerlaw_edges_per_node = 4;

  /// "community:c,n,d,p" or "powerlaw:n,m".
  static GraphSource from_generator_spec(const std::string& spec);
  static GraphSource from_file(std::string path);

  std::string describe() const;
  std::vector<Edge> load_edges(std::uint64_t seed) const;
};

struct ExperimentConfig {
  PartitionMode partitioner = PartitionMode::kMoctopus;
  std::uint32_t modules = 64;
  std::uint32_t k = 3;
  std::uint32_t batch_size = 1024;
  std::uint64_t seed = 1;
  std::uint32_t degree_threshold = 16;
  double capacity_factor = 1.05;
  double mispartition_fraction = 0.0;
  GraphSource source;

  PartitionerConfig partitioner_config() const;
  FabricConfig fabric_config() const;
};

/// Ledger delta and result digest for one run of the query batch.
struct PassMetrics {
  std::uint64_t cpc_bytes = 0;
  std::uint64_t ipc_bytes = 0;
  std::uint64_t host_lookups = 0;
  std::vector<std::uint64_t> intra_lookups;
  std::uint64_t intra_total = 0;
  std::uint64_t intra_max = 0;
  double max_over_avg_lookup_ratio = 0.0;
  std::uint64_t result_checksum = 0;
  std::uint64_t wall_ms = 0;
};

struct ExperimentResult {
  // Ingest phase.
  std::uint64_t events = 0;
  std::uint64_t inserted = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t nodes_known = 0;
  std::uint64_t host_resident = 0;
  std::uint64_t promotions = 0;
  std::uint64_t ingest_cpc_bytes = 0;
  std::uint64_t memory_warnings = 0;

  // Query batch run twice around one migration pass.
  PassMetrics pass1;
  PassMetrics pass2;
  std::uint64_t reports_considered = 0;
  std::uint64_t migrations_planned = 0;
  std::uint64_t migrations_applied = 0;
  std::uint64_t migration_cpc_bytes = 0;

  std::uint64_t result_checksum = 0;  // identical across passes and partitioners
  std::uint64_t wall_ms_total = 0;
};

/// Order-independent digest of a result matrix; equal answer sets always
/// hash equal regardless of partitioning, module count, or migration state.
std::uint64_t answers_checksum(const std::vector<std::vector<NodeId>>& answers);

/// Ingests the edges as one insert stream, samples batch_size sources
/// uniformly (seeded), runs the k-hop batch, applies one migration pass,
/// and re-runs the identical batch.
ExperimentResult run_experiment(const ExperimentConfig& config, std::span<const Edge> edges);
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Key/value tree writer with two-space indentation and stable key order;
/// every report the CLI emits goes through this.
class KvWriter {
 public:
  explicit KvWriter(std::ostream& out) : out_(&out) {}
  void open(std::string_view key);
  void close();
  void item(std::string_view key, std::uint64_t value);
  void item(std::string_view key, double value);                // fixed %.6f
  void item(std::string_view key, std::string_view value);
  void item(std::string_view key, const char* value) { item(key, std::string_view(value)); }
  void item(std::string_view key, bool value);
  void item_hex(std::string_view key, std::uint64_t value);     // 0x%016x
  void item(std::string_view key, std::span<const std::uint64_t> values);

 private:
  void indent();
  std::ostream* out_;
  int depth_ = 0;
};

/// Renders one experiment as a subtree under `name`, wall_ms keys last in
/// each section so determinism checks can strip them by line.
void render_experiment(KvWriter& writer, std::string_view name, const ExperimentConfig& config,
                       const ExperimentResult& result);

const char* partition_mode_name(PartitionMode mode);

}  // namespace moctopus
