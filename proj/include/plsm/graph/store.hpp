#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "plsm/graph/entries.hpp"
#include "plsm/lsm/engine.hpp"
#include "plsm/policy/cost_model.hpp"
#include "plsm/policy/workload_tracker.hpp"
#include "plsm/sketch/degree_sketch.hpp"

namespace plsm::graph {

enum class UpdatePolicy : uint8_t { kAdaptive, kAlwaysDelta, kAlwaysPivot };

const char* to_string(UpdatePolicy p);
std::optional<UpdatePolicy> parse_policy(std::string_view s);

struct GraphConfig {
  DirectionMode direction = DirectionMode::kUndirected;
  UpdatePolicy policy = UpdatePolicy::kAdaptive;
  CodecMode codec = CodecMode::kRaw;
  uint32_t ef_segment_length = 128;
  // Filter neighbors whose vertex has been deleted at read time.
  bool strict = false;
  bool allow_self_loops = true;
  uint64_t sketch_seed = 0x9d2c5680u;
  size_t theta_window = 1024;
  lsm::TreeConfig tree;
};

// How each half of an edge update was applied. Undirected self-loops have a
// single half.
struct EdgeRoute {
  UpdateKind first = UpdateKind::kDelta;
  std::optional<UpdateKind> second;
};

struct Element {
  bool is_edge = false;
  VertexId a = 0;
  VertexId b = 0;  // edges only

  static Element vertex(VertexId u) { return {false, u, 0}; }
  static Element edge(VertexId u, VertexId v) { return {true, u, v}; }
  auto operator<=>(const Element&) const = default;
};

struct StoreStats {
  uint64_t vertices = 0;  // live counters; see census() for exact values
  uint64_t edges = 0;
  double avg_degree = 0;
  uint64_t delta_updates = 0;  // half-updates routed as merges
  uint64_t pivot_updates = 0;  // half-updates routed as read-fold-rewrite
  double delta_estimate_sum = 0;  // sketch estimates at routing time
  double pivot_estimate_sum = 0;
  double theta_lookup = 0.5;
  int levels = 1;
  lsm::IoCounters io;
};

struct Census {
  uint64_t vertices = 0;
  uint64_t edges = 0;
  uint64_t half_edges = 0;  // sum of list lengths
};

std::string vertex_key(VertexId u);
VertexId vertex_from_key(std::string_view key);

// Graph API over one engine. Adjacency entries live under the 'V' key prefix
// and properties under 'P'.
class GraphStore {
 public:
  // Direction, codec and sketch seed stored in an existing MANIFEST win over
  // `config`; the update policy is taken from `config` on every open.
  static std::unique_ptr<GraphStore> open(const std::string& dir, GraphConfig config,
                                          lsm::Env* env = nullptr);
  ~GraphStore();

  GraphStore(const GraphStore&) = delete;
  GraphStore& operator=(const GraphStore&) = delete;

  // Writes an empty pivot only when the vertex does not exist yet.
  void add_vertex(VertexId u);
  void delete_vertex(VertexId u);
  EdgeRoute add_edge(VertexId u, VertexId v);
  EdgeRoute delete_edge(VertexId u, VertexId v);

  std::optional<Adjacency> get_neighbors(VertexId u);
  std::optional<std::vector<VertexId>> get_out_neighbors(VertexId u);
  std::optional<std::vector<VertexId>> get_in_neighbors(VertexId u);
  bool has_edge(VertexId u, VertexId v);
  bool exists(VertexId u);

  void set_property(const Element& e, std::string_view name, std::string_view value);
  std::optional<std::string> get_property(const Element& e, std::string_view name);
  void delete_property(const Element& e, std::string_view name);
  std::map<std::string, std::string> properties(const Element& e);
  std::vector<Element> find_by_property(bool is_edge, std::string_view name,
                                        std::string_view value);

  StoreStats stats() const;
  // Exact counts from a full scan of the adjacency keyspace.
  Census census();
  policy::CostParams current_params() const;
  UpdatePolicy policy() const { return config_.policy; }
  void set_policy(UpdatePolicy p) { config_.policy = p; }
  const GraphConfig& config() const { return config_; }

  // Reset I/O counters, routing counters and the workload window.
  void reset_stats();

  lsm::Engine& engine() { return *engine_; }
  const sketch::DegreeSketch& sketch() const { return sketch_; }

  // Persists the sketch and counters, then closes the engine.
  void close();

 private:
  GraphStore(GraphConfig config, std::unique_ptr<lsm::Engine> engine);

  UpdateKind route(VertexId u);
  void half_update(VertexId u, bool out_list, VertexId id, bool add, UpdateKind kind);
  EdgeRoute edge_update(VertexId u, VertexId v, bool add);
  std::optional<AdjacencyPayload> read_payload(VertexId u);
  void restore_state();
  std::string state_json() const;
  void filter_dangling(std::vector<VertexId>& ids);
  bool exists_locked(VertexId u);

  GraphConfig config_;
  std::unique_ptr<lsm::Engine> engine_;
  std::mutex write_mu_;
  sketch::DegreeSketch sketch_;
  policy::WorkloadTracker tracker_;

  std::atomic<uint64_t> vertices_{0};
  std::atomic<uint64_t> edges_{0};
  std::atomic<uint64_t> half_edges_{0};
  std::atomic<uint64_t> delta_updates_{0};
  std::atomic<uint64_t> pivot_updates_{0};
  double delta_estimate_sum_ = 0;
  double pivot_estimate_sum_ = 0;
  bool closed_ = false;
};

}  // namespace plsm::graph
