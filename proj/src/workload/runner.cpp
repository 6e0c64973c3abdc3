#include "plsm/workload/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <thread>

#include "plsm/error.hpp"
#include "plsm/workload/rng.hpp"

namespace plsm::workload {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

}  // namespace

GraphState GraphState::from_store(graph::GraphStore& store) {
  const bool directed = store.config().direction == DirectionMode::kDirected;
  GraphState state(store.config().direction);
  store.engine().scan(graph::vertex_key(0), std::string(1, 'W'),
                      [&](std::string_view key, const lsm::Value& value) {
                        auto adj = graph::resolve(graph::decode_payload(value.bytes));
                        if (!adj) return true;
                        const VertexId u = graph::vertex_from_key(key);
                        state.add_vertex(u);
                        for (VertexId v : adj->out) {
                          if (directed || u <= v) state.add_edge(u, v);
                        }
                        return true;
                      });
  return state;
}

void GraphState::add_vertex(VertexId u) {
  if (index_.emplace(u, vertices_.size()).second) {
    vertices_.push_back(u);
    degree_.push_back(0);
  }
}

bool GraphState::add_edge(VertexId u, VertexId v) {
  const bool directed = direction_ == DirectionMode::kDirected;
  const Edge key = directed || u <= v ? Edge{u, v} : Edge{v, u};
  add_vertex(u);
  add_vertex(v);
  if (!edges_.insert(key).second) return false;
  ++degree_[index_.at(u)];
  if (directed || u != v) ++degree_[index_.at(v)];
  return true;
}

uint64_t GraphState::degree(VertexId u) const {
  auto it = index_.find(u);
  return it == index_.end() ? 0 : degree_[it->second];
}

double GraphState::avg_degree() const {
  if (vertices_.empty()) return 0;
  uint64_t sum = 0;
  for (uint64_t d : degree_) sum += d;
  return static_cast<double>(sum) / static_cast<double>(vertices_.size());
}

LoadReport load_edges(graph::GraphStore& store, const std::vector<Edge>& edges, GraphState* state) {
  const auto start = Clock::now();
  const auto io_before = store.engine().io_stats();
  for (const auto& [u, v] : edges) {
    store.add_edge(u, v);
    if (state) state->add_edge(u, v);
  }
  LoadReport report;
  report.seconds = seconds_since(start);
  report.io = store.engine().io_stats() - io_before;
  const auto census = store.census();
  report.vertices = census.vertices;
  report.edges = census.edges;
  if (census.vertices > 0) {
    const auto n = static_cast<double>(census.vertices);
    report.avg_degree = static_cast<double>(census.edges) / n;
    report.mean_degree = static_cast<double>(census.half_edges) / n;
  }
  return report;
}

std::optional<std::pair<KeyDist, double>> parse_dist(const std::string& s) {
  if (s == "uniform") return std::pair{KeyDist::kUniform, 0.0};
  if (s.rfind("zipf:", 0) == 0) {
    try {
      size_t used = 0;
      const double exp = std::stod(s.substr(5), &used);
      if (used != s.size() - 5 || !(exp > 0)) return std::nullopt;
      return std::pair{KeyDist::kZipf, exp};
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

MetricsRow run_workload(graph::GraphStore& store, GraphState& state, const WorkloadSpec& spec,
                        const std::string& dataset) {
  if (state.vertices().empty()) throw_invalid("workload needs a non-empty store");
  if (spec.theta_lookup < 0 || spec.theta_lookup > 1) throw_invalid("theta_lookup outside [0, 1]");
  const auto& vertices = state.vertices();
  if (vertices.size() < 2 && spec.theta_lookup < 1) throw_invalid("updates need two vertices");

  Rng rng(spec.seed);
  std::optional<WeightedSampler> zipf;
  if (spec.dist == KeyDist::kZipf) zipf = zipf_sampler(vertices.size(), spec.zipf_exponent);
  auto pick = [&]() -> VertexId {
    return vertices[zipf ? zipf->sample(rng) : rng.below(vertices.size())];
  };

  // Readers check that an edge present before the run is never lost.
  std::vector<Edge> probes;
  if (spec.reader_threads > 0) {
    Rng probe_rng(spec.seed ^ 0x5bd1e995u);
    for (int i = 0; i < 256; ++i) {
      const VertexId u = vertices[probe_rng.below(vertices.size())];
      auto adj = store.get_neighbors(u);
      if (adj && !adj->out.empty()) probes.emplace_back(u, adj->out[probe_rng.below(adj->out.size())]);
    }
  }
  std::atomic<bool> stop{false};
  std::atomic<uint64_t> checks{0};
  std::atomic<uint64_t> failures{0};
  std::vector<std::thread> readers;
  for (unsigned t = 0; t < spec.reader_threads && !probes.empty(); ++t) {
    readers.emplace_back([&, t] {
      Rng local(spec.seed + 7919 * (t + 1));
      while (!stop.load(std::memory_order_relaxed)) {
        const auto& [u, v] = probes[local.below(probes.size())];
        auto adj = store.engine().get(graph::vertex_key(u));
        bool ok = false;
        if (adj) {
          auto resolved = graph::resolve(graph::decode_payload(adj->bytes));
          ok = resolved && std::binary_search(resolved->out.begin(), resolved->out.end(), v) &&
               std::is_sorted(resolved->out.begin(), resolved->out.end());
        }
        ++checks;
        if (!ok) ++failures;
      }
    });
  }

  store.reset_stats();
  MetricsRow row;
  row.dataset = dataset;
  row.policy = graph::to_string(store.policy());
  row.theta_lookup = spec.theta_lookup;
  row.ops = spec.ops;

  double predicted = 0;
  double delta_degree_sum = 0;
  double pivot_degree_sum = 0;
  double pivot_cost_sum = 0;
  uint64_t halves = 0;
  const auto start = Clock::now();

  auto account_half = [&](UpdateKind kind, uint64_t degree, const policy::CostParams& p) {
    const double d = static_cast<double>(degree);
    pivot_cost_sum += policy::pivot_cost(p, d);
    ++halves;
    if (kind == UpdateKind::kDelta) {
      delta_degree_sum += d;
      predicted += 2 * p.id_bytes * policy::write_amplification(p) / p.block_bytes;
    } else {
      pivot_degree_sum += d;
      predicted += policy::pivot_cost(p, d);
    }
  };

  for (uint64_t i = 0; i < spec.ops; ++i) {
    const policy::CostParams p = store.current_params();
    if (rng.unit() < spec.theta_lookup) {
      const VertexId u = pick();
      store.get_neighbors(u);
      ++row.lookups;
      const double d = static_cast<double>(state.degree(u));
      predicted += policy::expected_retrieval_cost(static_cast<int>(p.levels), p.size_ratio,
                                                   p.avg_degree) +
                   1 + (d + 1) * p.id_bytes / p.block_bytes;
    } else {
      const VertexId u = pick();
      VertexId v = pick();
      while (v == u) v = pick();
      const uint64_t du = state.degree(u);
      const uint64_t dv = state.degree(v);
      const auto route = store.add_edge(u, v);
      ++row.updates;
      account_half(route.first, du, p);
      if (route.second) account_half(*route.second, dv, p);
      state.add_edge(u, v);
    }
  }
  row.seconds = seconds_since(start);
  stop = true;
  for (auto& t : readers) t.join();

  const auto stats = store.stats();
  row.ops_per_sec = row.seconds > 0 ? static_cast<double>(spec.ops) / row.seconds : 0;
  row.block_reads = stats.io.block_reads;
  row.block_writes = stats.io.block_writes;
  row.compaction_reads = stats.io.compaction_reads;
  row.total_io = stats.io.total_io();
  row.predicted_io = predicted;
  const auto p = store.current_params();
  row.predicted_delta_cost = p.theta_update > 0 ? policy::delta_cost(p) : 0;
  row.predicted_pivot_cost_mean = halves ? pivot_cost_sum / static_cast<double>(halves) : 0;
  row.threshold = policy::threshold(p);
  row.delta_updates = stats.delta_updates;
  row.pivot_updates = stats.pivot_updates;
  row.delta_mean_degree =
      stats.delta_updates ? delta_degree_sum / static_cast<double>(stats.delta_updates) : 0;
  row.pivot_mean_degree =
      stats.pivot_updates ? pivot_degree_sum / static_cast<double>(stats.pivot_updates) : 0;
  row.levels = stats.levels;
  row.reader_checks = checks;
  row.reader_failures = failures;
  return row;
}

std::string csv_header() {
  return "dataset,policy,theta_lookup,ops,lookups,updates,seconds,ops_per_sec,block_reads,"
         "block_writes,compaction_reads,total_io,predicted_io,predicted_delta_cost,"
         "predicted_pivot_cost_mean,threshold,delta_updates,pivot_updates,delta_mean_degree,"
         "pivot_mean_degree,levels,reader_checks,reader_failures";
}

std::string to_csv(const MetricsRow& r) {
  std::ostringstream out;
  out << r.dataset << ',' << r.policy << ',' << fmt(r.theta_lookup, 3) << ',' << r.ops << ','
      << r.lookups << ',' << r.updates << ',' << fmt(r.seconds, 3) << ',' << fmt(r.ops_per_sec, 1)
      << ',' << r.block_reads << ',' << r.block_writes << ',' << r.compaction_reads << ','
      << r.total_io << ',' << fmt(r.predicted_io, 1) << ',' << fmt(r.predicted_delta_cost) << ','
      << fmt(r.predicted_pivot_cost_mean) << ',' << r.threshold << ',' << r.delta_updates << ','
      << r.pivot_updates << ',' << fmt(r.delta_mean_degree, 2) << ','
      << fmt(r.pivot_mean_degree, 2) << ',' << r.levels << ',' << r.reader_checks << ','
      << r.reader_failures;
  return out.str();
}

std::string predict_report(const policy::CostParams& params, const std::vector<uint64_t>& degrees) {
  std::ostringstream out;
  for (LevelingMode mode : {LevelingMode::kLeveling, LevelingMode::kOneLeveling}) {
    policy::CostParams p = params;
    p.mode = mode;
    p.validate();
    out << "mode," << to_string(mode) << '\n';
    out << "write_amplification," << fmt(policy::write_amplification(p)) << '\n';
    if (p.theta_update > 0) {
      out << "delta_cost," << fmt(policy::delta_cost(p), 5) << '\n';
    } else {
      out << "delta_cost,undefined\n";
    }
    for (uint64_t d : degrees) {
      out << "pivot_cost,d=" << d << ',' << fmt(policy::pivot_cost(p, static_cast<double>(d)), 5)
          << '\n';
    }
    out << "threshold," << policy::threshold(p) << '\n';
    out << "threshold_scan," << policy::threshold_scan(p) << '\n';
    const int levels = static_cast<int>(p.levels);
    for (int i = 1; i < levels; ++i) {
      out << "level_hit_probability,i=" << i << ','
          << fmt(policy::level_hit_probability(i, p.size_ratio, p.avg_degree), 4) << '\n';
    }
    out << "expected_retrieval_cost,"
        << fmt(policy::expected_retrieval_cost(levels, p.size_ratio, p.avg_degree), 3) << '\n';
  }
  return out.str();
}

}  // namespace plsm::workload
