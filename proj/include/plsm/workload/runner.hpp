#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "plsm/graph/store.hpp"
#include "plsm/policy/cost_model.hpp"
#include "plsm/workload/edge_list.hpp"

namespace plsm::workload {

// Exact view of the graph kept beside the store: the key population for
// workload sampling and the true degree of every vertex.
class GraphState {
 public:
  explicit GraphState(DirectionMode direction) : direction_(direction) {}

  // Reads every adjacency list back from the store.
  static GraphState from_store(graph::GraphStore& store);

  void add_vertex(VertexId u);
  // Returns false if the edge was already present.
  bool add_edge(VertexId u, VertexId v);

  const std::vector<VertexId>& vertices() const { return vertices_; }
  uint64_t degree(VertexId u) const;
  uint64_t edge_count() const { return edges_.size(); }
  double avg_degree() const;

 private:
  struct PairHash {
    size_t operator()(const Edge& e) const {
      return std::hash<uint64_t>()(e.first * 0x9e3779b97f4a7c15ULL ^ e.second);
    }
  };

  DirectionMode direction_;
  std::vector<VertexId> vertices_;
  std::unordered_map<VertexId, size_t> index_;
  std::vector<uint64_t> degree_;
  std::unordered_set<Edge, PairHash> edges_;
};

struct LoadReport {
  uint64_t vertices = 0;
  uint64_t edges = 0;
  double avg_degree = 0;   // m / n
  double mean_degree = 0;  // half-edges / n, counts both endpoints of an undirected edge
  double seconds = 0;
  lsm::IoCounters io;
};

// Inserts edges in file order, then reports exact census numbers.
LoadReport load_edges(graph::GraphStore& store, const std::vector<Edge>& edges,
                      GraphState* state = nullptr);

enum class KeyDist : uint8_t { kUniform, kZipf };

struct WorkloadSpec {
  double theta_lookup = 0.5;
  uint64_t ops = 100000;
  KeyDist dist = KeyDist::kUniform;
  double zipf_exponent = 0.99;
  uint64_t seed = 1;
  // Concurrent reader threads checking that loaded edges never disappear.
  unsigned reader_threads = 0;
};

// Parses "uniform" or "zipf:EXP".
std::optional<std::pair<KeyDist, double>> parse_dist(const std::string& s);

struct MetricsRow {
  std::string dataset;
  std::string policy;
  double theta_lookup = 0;
  uint64_t ops = 0;
  uint64_t lookups = 0;
  uint64_t updates = 0;
  double seconds = 0;
  double ops_per_sec = 0;
  uint64_t block_reads = 0;
  uint64_t block_writes = 0;
  uint64_t compaction_reads = 0;
  uint64_t total_io = 0;
  double predicted_io = 0;
  double predicted_delta_cost = 0;
  double predicted_pivot_cost_mean = 0;
  uint64_t threshold = 0;
  uint64_t delta_updates = 0;
  uint64_t pivot_updates = 0;
  double delta_mean_degree = 0;  // true degree at routing time
  double pivot_mean_degree = 0;
  int levels = 0;
  uint64_t reader_checks = 0;
  uint64_t reader_failures = 0;
};

// Mix of get_neighbors and add_edge over existing vertices. Resets the
// store's counters first; `state` is updated with the inserted edges.
// predicted_io sums, per operation, the cost model evaluated at the live
// parameters and the true degree of the touched vertex:
//   lookup           C_R + 1 + (d+1) I/B
//   delta half       2 I WA / B
//   pivot half       2 + (d+1) I/B + (d+2) I WA / B
MetricsRow run_workload(graph::GraphStore& store, GraphState& state, const WorkloadSpec& spec,
                        const std::string& dataset);

std::string csv_header();
std::string to_csv(const MetricsRow& row);

// Cost-model table for both leveling modes over a degree grid.
std::string predict_report(const policy::CostParams& params, const std::vector<uint64_t>& degrees);

}  // namespace plsm::workload
