#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "plsm/error.hpp"
#include "plsm/lsm/env.hpp"
#include "plsm/workload/edge_list.hpp"
#include "plsm/workload/rng.hpp"
#include "plsm/workload/runner.hpp"

using namespace plsm;
using namespace plsm::workload;

namespace {

graph::GraphConfig config(graph::UpdatePolicy policy = graph::UpdatePolicy::kAdaptive) {
  graph::GraphConfig c;
  c.policy = policy;
  c.tree.memtable_bytes = 64 << 10;
  return c;
}

std::map<VertexId, uint64_t> degrees(const std::vector<Edge>& edges) {
  std::map<VertexId, uint64_t> d;
  for (const auto& [u, v] : edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

}  // namespace

TEST(Rng, BelowAndUnitRanges) {
  Rng a(5), b(5);
  for (int i = 0; i < 10000; ++i) {
    const auto x = a.below(7);
    ASSERT_EQ(x, b.below(7));
    ASSERT_LT(x, 7u);
    const double u = a.unit();
    b.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, ZipfFavoursLowRanks) {
  const auto z = zipf_sampler(100, 1.0);
  Rng rng(3);
  std::vector<int> hits(100);
  for (int i = 0; i < 100000; ++i) ++hits[z.sample(rng)];
  // Oracle: rank 0 vs rank 1 ratio is 2 for exponent 1.
  EXPECT_NEAR(static_cast<double>(hits[0]) / hits[1], 2.0, 0.15);
  EXPECT_GT(hits[0], hits[99] * 20);
}

TEST(EdgeList, GenerateIsDeterministic) {
  const auto a = format_edge_list(generate_uniform(100, 500, 7));
  const auto b = format_edge_list(generate_uniform(100, 500, 7));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, format_edge_list(generate_uniform(100, 500, 8)));
}

TEST(EdgeList, UniformHasExactlyMDistinctEdges) {
  const auto edges = generate_uniform(100, 500, 7);
  ASSERT_EQ(edges.size(), 500u);
  std::set<std::pair<VertexId, VertexId>> seen;
  for (auto [u, v] : edges) {
    ASSERT_NE(u, v);
    ASSERT_LT(std::max(u, v), 100u);
    ASSERT_TRUE(seen.insert({std::min(u, v), std::max(u, v)}).second);
  }
  EXPECT_THROW(generate_uniform(3, 4, 1), Error);
}

TEST(EdgeList, PowerLawIsSkewed) {
  const auto edges = generate_power_law(10000, 100000, 2.0, 1);
  ASSERT_EQ(edges.size(), 100000u);
  const auto d = degrees(edges);
  uint64_t max = 0;
  for (const auto& [u, k] : d) max = std::max(max, k);
  const double mean = 2.0 * edges.size() / d.size();
  EXPECT_GT(max / mean, 20.0);
  std::set<std::pair<VertexId, VertexId>> seen;
  for (auto [u, v] : edges) {
    ASSERT_NE(u, v);
    ASSERT_TRUE(seen.insert({std::min(u, v), std::max(u, v)}).second);
  }
}

TEST(EdgeList, ParseAndFormat) {
  const auto edges = parse_edge_list("# header\n1 2\n\n  2\t3 \n# mid\n1 3\n");
  EXPECT_EQ(edges, (std::vector<Edge>{{1, 2}, {2, 3}, {1, 3}}));
  EXPECT_EQ(parse_edge_list(format_edge_list(edges, "c")), edges);
  for (const std::string bad : {"1 2\n3\n", "1 2\n3 x\n", "1 2\n1 2 3\n", "1 2\n-1 4\n"}) {
    try {
      parse_edge_list(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
  }
  EXPECT_THROW(read_edge_list("/nonexistent/file"), Error);
}

TEST(Load, TriangleCounts) {
  lsm::MemEnv env;
  auto store = graph::GraphStore::open("/g", config(), &env);
  const auto r = load_edges(*store, parse_edge_list("1 2\n2 3\n1 3\n"));
  EXPECT_EQ(r.vertices, 3u);
  EXPECT_EQ(r.edges, 3u);
  EXPECT_DOUBLE_EQ(r.mean_degree, 2.0);
  EXPECT_DOUBLE_EQ(r.avg_degree, 1.0);
  const auto again = load_edges(*store, parse_edge_list("1 2\n2 3\n1 3\n"));
  EXPECT_EQ(again.edges, 3u);
}

TEST(Load, GraphStateMatchesCensus) {
  lsm::MemEnv env;
  auto store = graph::GraphStore::open("/g", config(), &env);
  const auto edges = generate_power_law(500, 3000, 2.2, 4);
  GraphState state(DirectionMode::kUndirected);
  load_edges(*store, edges, &state);
  const auto from_store = GraphState::from_store(*store);
  EXPECT_EQ(from_store.edge_count(), state.edge_count());
  EXPECT_EQ(from_store.vertices().size(), state.vertices().size());
  const auto d = degrees(edges);
  for (const auto& [u, k] : d) ASSERT_EQ(from_store.degree(u), k);
}

TEST(Workload, ParseDist) {
  EXPECT_EQ(parse_dist("uniform")->first, KeyDist::kUniform);
  const auto z = parse_dist("zipf:1.2");
  ASSERT_TRUE(z);
  EXPECT_EQ(z->first, KeyDist::kZipf);
  EXPECT_DOUBLE_EQ(z->second, 1.2);
  EXPECT_FALSE(parse_dist("zipf:").has_value());
  EXPECT_FALSE(parse_dist("zipf:-1").has_value());
  EXPECT_FALSE(parse_dist("normal").has_value());
}

TEST(Workload, ReadOnlyWorkloadWritesNothing) {
  lsm::MemEnv env;
  auto store = graph::GraphStore::open("/g", config(), &env);
  load_edges(*store, generate_uniform(300, 2000, 1));
  store->engine().compact_all();
  auto state = GraphState::from_store(*store);
  WorkloadSpec spec;
  spec.theta_lookup = 1.0;
  spec.ops = 3000;
  const auto row = run_workload(*store, state, spec, "u");
  EXPECT_EQ(row.block_writes, 0u);
  EXPECT_EQ(row.updates, 0u);
  EXPECT_EQ(row.lookups, 3000u);
}

TEST(Workload, WriteOnlyDeltaReadsNothing) {
  lsm::MemEnv env;
  auto c = config(graph::UpdatePolicy::kAlwaysDelta);
  c.tree.memtable_bytes = 16 << 20;
  auto store = graph::GraphStore::open("/g", c, &env);
  load_edges(*store, generate_uniform(300, 2000, 1));
  store->engine().compact_all();
  auto state = GraphState::from_store(*store);
  WorkloadSpec spec;
  spec.theta_lookup = 0;
  spec.ops = 3000;
  const auto row = run_workload(*store, state, spec, "u");
  EXPECT_EQ(row.block_reads, 0u);
  EXPECT_EQ(row.pivot_updates, 0u);
  EXPECT_EQ(row.delta_updates, 6000u);
}

TEST(Workload, IdenticalRunsGiveIdenticalCounters) {
  std::vector<std::string> rows;
  for (int k = 0; k < 2; ++k) {
    lsm::MemEnv env;
    auto store = graph::GraphStore::open("/g", config(), &env);
    load_edges(*store, generate_power_law(1000, 8000, 2.0, 3));
    auto state = GraphState::from_store(*store);
    WorkloadSpec spec;
    spec.ops = 5000;
    spec.seed = 77;
    spec.dist = KeyDist::kZipf;
    auto row = run_workload(*store, state, spec, "p");
    row.seconds = 0;
    row.ops_per_sec = 0;
    rows.push_back(to_csv(row));
  }
  EXPECT_EQ(rows[0], rows[1]);
}

TEST(Workload, AdaptiveRoutesHighDegreeToDelta) {
  lsm::MemEnv env;
  auto store = graph::GraphStore::open("/g", config(), &env);
  load_edges(*store, generate_power_law(2000, 40000, 2.0, 5));
  store->engine().compact_all();
  auto state = GraphState::from_store(*store);
  WorkloadSpec spec;
  spec.theta_lookup = 0.8;
  spec.ops = 20000;
  const auto row = run_workload(*store, state, spec, "p");
  ASSERT_GT(row.delta_updates, 0u);
  ASSERT_GT(row.pivot_updates, 0u);
  EXPECT_GT(row.delta_mean_degree, row.pivot_mean_degree);
  EXPECT_EQ(row.delta_updates + row.pivot_updates, 2 * row.updates);
}

TEST(Workload, ReaderThreadsNeverLoseEdges) {
  lsm::MemEnv env;
  auto store = graph::GraphStore::open("/g", config(), &env);
  load_edges(*store, generate_uniform(500, 4000, 2));
  auto state = GraphState::from_store(*store);
  WorkloadSpec spec;
  spec.theta_lookup = 0.2;
  spec.ops = 20000;
  spec.reader_threads = 3;
  const auto row = run_workload(*store, state, spec, "u");
  EXPECT_GT(row.reader_checks, 0u);
  EXPECT_EQ(row.reader_failures, 0u);
}

TEST(Workload, CsvShape) {
  MetricsRow r;
  r.dataset = "d";
  r.policy = "adaptive";
  const auto header = csv_header();
  const auto line = to_csv(r);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(line.begin(), line.end(), ','));
}

TEST(Predict, ReportRows) {
  policy::CostParams p;
  p.avg_degree = 32;
  const auto text = predict_report(p, {19, 20});
  EXPECT_NE(text.find("mode,leveling\n"), std::string::npos);
  EXPECT_NE(text.find("delta_cost,3.71181\n"), std::string::npos);
  EXPECT_NE(text.find("pivot_cost,d=20,3.75977\n"), std::string::npos);
  EXPECT_NE(text.find("threshold,20\nthreshold_scan,20\n"), std::string::npos);
  EXPECT_NE(text.find("threshold,25\nthreshold_scan,25\n"), std::string::npos);

  p.avg_degree = 37.11;
  const auto probs = predict_report(p, {});
  const double want[] = {0.964, 0.284, 0.033};
  for (int i = 1; i <= 3; ++i) {
    const std::string tag = "level_hit_probability,i=" + std::to_string(i) + ",";
    const auto at = probs.find(tag);
    ASSERT_NE(at, std::string::npos) << tag;
    EXPECT_NEAR(std::stod(probs.substr(at + tag.size())), want[i - 1], 1e-3);
  }

  p.theta_lookup = 0;
  p.theta_update = 1;
  EXPECT_NE(predict_report(p, {}).find("threshold,0\n"), std::string::npos);
}
