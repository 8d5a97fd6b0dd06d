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
#include "moctopus/experiment.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "moctopus/generators.hpp"
#include "moctopus/graph.hpp"
#include "moctopus/kernels.hpp"

namespace moctopus {

namespace {

std::uint64_t now_ms() {
  using namespace std::chrono;
  return std::uint64_t(duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count());
}

std::vector<std::string> split_fields(const std::string& text, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(sep, start);
    fields.push_back(text.substr(start, end == std::string::npos ? end : end - start));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return fields;
}

std::uint64_t parse_u64_field(const std::string& field, const char* what) {
  try {
    std::size_t used = 0;
    std::uint64_t value = std::stoull(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw ContractViolation(std::string("bad generator field for ") + what + ": '" + field + "'");
  }
}

double parse_double_field(const std::string& field, const char* what) {
  try {
    std::size_t used = 0;
    double value = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw ContractViolation(std::string("bad generator field for ") + what + ": '" + field + "'");
  }
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

}  // namespace

GraphSource GraphSource::from_generator_spec(const std::string& spec) {
  GraphSource source;
  std::size_t colon = spec.find(':');
  std::string family = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto fields = split_fields(args, ',');
  if (family == "community") {
    if (fields.size() != 4)
      throw ContractViolation("generator spec: expected community:c,n,d,p");
    source.kind = Kind::kCommunity;
    source.communities = std::uint32_t(parse_u64_field(fields[0], "communities"));
    source.nodes_each = std::uint32_t(parse_u64_field(fields[1], "nodes_each"));
    source.out_degree = std::uint32_t(parse_u64_field(fields[2], "out_degree"));
    source.p_intra = parse_double_field(fields[3], "p_intra");
  } else if (family == "powerlaw") {
    if (fields.size() != 2) throw ContractViolation("generator spec: expected powerlaw:n,m");
    source.kind = Kind::kPowerlaw;
    source.powerlaw_nodes = parse_u64_field(fields[0], "nodes");
    source.powerlaw_edges_per_node = std::uint32_t(parse_u64_field(fields[1], "edges_per_node"));
  } else {
    throw ContractViolation("generator spec: unknown family '" + family + "'");
  }
  return source;
}

GraphSource GraphSource::from_file(std::string path) {
  GraphSource source;
  source.kind = Kind::kFile;
  source.path = std::move(path);
  return source;
}

std::string GraphSource::describe() const {
  switch (kind) {
    case Kind::kFile:
      return "file:" + path;
    case Kind::kCommunity:
      return "community:" + std::to_string(communities) + "," + std::to_string(nodes_each) + "," +
             std::to_string(out_degree) + "," + format_double(p_intra);
    case Kind::kPowerlaw:
      return "powerlaw:" + std::to_string(powerlaw_nodes) + "," +
             std::to_string(powerlaw_edges_per_node);
  }
  return "unknown";
}

std::vector<Edge> GraphSource::load_edges(std::uint64_t seed) const {
  switch (kind) {
    case Kind::kFile: {
      std::ifstream in(path);
      if (!in) throw std::runtime_error("cannot open input file: " + path);
      try {
        return parse_snap_edgelist(in);
      } catch (const ParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
      }
    }
    case Kind::kCommunity:
      return gen_community_graph(communities, nodes_each, out_degree, p_intra, seed);
    case Kind::kPowerlaw:
      return gen_powerlaw_graph(powerlaw_nodes, powerlaw_edges_per_node, seed);
  }
  throw ContractViolation("load_edges: bad source kind");
}

PartitionerConfig ExperimentConfig::partitioner_config() const {
  PartitionerConfig pc;
  pc.degree_threshold = degree_threshold;
  pc.capacity_factor = capacity_factor;
  pc.mispartition_fraction = mispartition_fraction;
  pc.mispartition_seed = seed;
  return pc;
}

FabricConfig ExperimentConfig::fabric_config() const {
  FabricConfig fc;
  fc.module_count = modules;
  return fc;
}

std::uint64_t answers_checksum(const std::vector<std::vector<NodeId>>& answers) {
  std::uint64_t sum = 0;
  for (std::size_t q = 0; q < answers.size(); ++q)
    sum += kernels::checksum_pairs(std::uint64_t(q), answers[q]);
  return sum;
}

namespace {

PassMetrics run_pass(System& system, const QueryBatch& batch, std::uint32_t k) {
  const CostLedger before = system.fabric().ledger();
  const std::uint64_t t0 = now_ms();
  QueryOutcome outcome = system.run_query_batch(batch, k);
  const std::uint64_t t1 = now_ms();
  const CostLedger delta = system.fabric().ledger().delta_since(before);

  PassMetrics metrics;
  metrics.cpc_bytes = delta.cpc_bytes;
  metrics.ipc_bytes = delta.ipc_bytes;
  metrics.host_lookups = delta.host_lookups;
  metrics.intra_lookups = delta.intra_lookups;
  metrics.intra_total = delta.intra_total();
  metrics.intra_max = delta.intra_max();
  metrics.max_over_avg_lookup_ratio =
      metrics.intra_total == 0
          ? 0.0
          : double(metrics.intra_max) * double(delta.intra_lookups.size()) /
                double(metrics.intra_total);
  metrics.result_checksum = answers_checksum(outcome.answers);
  metrics.wall_ms = t1 - t0;
  return metrics;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, std::span<const Edge> edges) {
  const std::uint64_t t_start = now_ms();
  System system(config.fabric_config(), config.partitioner_config(), config.partitioner);

  ExperimentResult result;
  result.events = edges.size();

  // Ingest as one insert stream.
  {
    const CostLedger before = system.fabric().ledger();
    std::vector<EdgeEvent> events;
    events.reserve(edges.size());
    for (const Edge& e : edges) events.push_back(EdgeEvent{EventKind::kInsert, e});
    for (UpdateStatus status : system.process_update_batch(events)) {
      if (status == UpdateStatus::kInserted)
        result.inserted += 1;
      else
        result.duplicates += 1;
    }
    result.ingest_cpc_bytes = system.fabric().ledger().delta_since(before).cpc_bytes;
  }
  result.nodes_known = system.partitioner().known_nodes();
  result.host_resident = system.host_store().resident_count();
  result.promotions = system.promotions();
  result.memory_warnings = system.fabric().modules_over_budget().size();

  // Sample the query batch uniformly over known nodes.
  QueryBatch batch;
  {
    std::vector<NodeId> ids = system.partitioner().known_node_ids_sorted();
    kernels::SplitMix64 rng(kernels::mix64(config.seed) ^ 0x71756572796261ull);
    if (!ids.empty())
      for (std::uint32_t i = 0; i < config.batch_size; ++i)
        batch.sources.push_back(ids[rng.next_below(ids.size())]);
  }

  result.pass1 = run_pass(system, batch, config.k);

  {
    const CostLedger before = system.fabric().ledger();
    MigrationOutcome migration = system.run_migration_pass();
    result.reports_considered = migration.reports_considered;
    result.migrations_planned = migration.moves_planned;
    result.migrations_applied = migration.moves_applied;
    result.migration_cpc_bytes = system.fabric().ledger().delta_since(before).cpc_bytes;
  }

  result.pass2 = run_pass(system, batch, config.k);

  if (result.pass1.result_checksum != result.pass2.result_checksum)
    throw ProtocolError("run_experiment: migration changed query results");
  result.result_checksum = result.pass1.result_checksum;
  result.wall_ms_total = now_ms() - t_start;
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  std::vector<Edge> edges = config.source.load_edges(config.seed);
  return run_experiment(config, edges);
}

void KvWriter::indent() {
  for (int i = 0; i < depth_; ++i) *out_ << "  ";
}

void KvWriter::open(std::string_view key) {
  indent();
  *out_ << key << ":\n";
  ++depth_;
}

void KvWriter::close() { --depth_; }

void KvWriter::item(std::string_view key, std::uint64_t value) {
  indent();
  *out_ << key << ": " << value << "\n";
}

void KvWriter::item(std::string_view key, double value) {
  indent();
  *out_ << key << ": " << format_double(value) << "\n";
}

void KvWriter::item(std::string_view key, std::string_view value) {
  indent();
  *out_ << key << ": " << value << "\n";
}

void KvWriter::item(std::string_view key, bool value) {
  indent();
  *out_ << key << ": " << (value ? "true" : "false") << "\n";
}

void KvWriter::item_hex(std::string_view key, std::uint64_t value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "0x%016" PRIx64, value);
  indent();
  *out_ << key << ": " << buffer << "\n";
}

void KvWriter::item(std::string_view key, std::span<const std::uint64_t> values) {
  indent();
  *out_ << key << ": [";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) *out_ << ", ";
    *out_ << values[i];
  }
  *out_ << "]\n";
}

const char* partition_mode_name(PartitionMode mode) {
  return mode == PartitionMode::kMoctopus ? "moctopus" : "hash";
}

namespace {

void render_pass(KvWriter& w, std::string_view name, const PassMetrics& pass) {
  w.open(name);
  w.item("cpc_bytes", pass.cpc_bytes);
  w.item("ipc_bytes", pass.ipc_bytes);
  w.item("host_lookups", pass.host_lookups);
  w.item("intra_lookups_total", pass.intra_total);
  w.item("intra_lookups_max", pass.intra_max);
  w.item("max_over_avg_lookup_ratio", pass.max_over_avg_lookup_ratio);
  w.item("intra_lookups", std::span<const std::uint64_t>(pass.intra_lookups));
  w.item_hex("result_checksum", pass.result_checksum);
  w.item("wall_ms", pass.wall_ms);
  w.close();
}

}  // namespace

void render_experiment(KvWriter& w, std::string_view name, const ExperimentConfig& config,
                       const ExperimentResult& result) {
  w.open(name);
  w.open("config");
  w.item("partitioner", partition_mode_name(config.partitioner));
  w.item("modules", std::uint64_t(config.modules));
  w.item("k", std::uint64_t(config.k));
  w.item("batch_size", std::uint64_t(config.batch_size));
  w.item("seed", config.seed);
  w.item("degree_threshold", std::uint64_t(config.degree_threshold));
  w.item("capacity_factor", config.capacity_factor);
  w.item("mispartition_fraction", config.mispartition_fraction);
  w.item("input", config.source.describe());
  w.close();
  w.open("ingest");
  w.item("events", result.events);
  w.item("inserted", result.inserted);
  w.item("duplicates", result.duplicates);
  w.item("nodes", result.nodes_known);
  w.item("host_resident", result.host_resident);
  w.item("promotions", result.promotions);
  w.item("cpc_bytes", result.ingest_cpc_bytes);
  w.item("memory_warnings", result.memory_warnings);
  w.close();
  render_pass(w, "pass1", result.pass1);
  w.open("migration");
  w.item("reports_considered", result.reports_considered);
  w.item("moves_planned", result.migrations_planned);
  w.item("moves_applied", result.migrations_applied);
  w.item("cpc_bytes", result.migration_cpc_bytes);
  w.close();
  render_pass(w, "pass2", result.pass2);
  w.item_hex("result_checksum", result.result_checksum);
  w.item("wall_ms", result.wall_ms_total);
  w.close();
}

}  // namespace moctopus
