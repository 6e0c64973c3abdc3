#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "plsm/error.hpp"
#include "plsm/graph/store.hpp"
#include "plsm/workload/edge_list.hpp"
#include "plsm/workload/runner.hpp"

using namespace plsm;

namespace {

struct StoreFlags {
  std::string data_dir = "plsm-data";
  std::string mode = "undirected";
  std::string policy = "adaptive";
  std::string leveling = "one-leveling";
  std::string codec = "raw";
  uint32_t size_ratio = 10;
  uint32_t block_bytes = 4096;
  uint64_t memtable_bytes = 4ull << 20;
  uint32_t bloom_bits = 10;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--data-dir", data_dir, "Store directory")->capture_default_str();
    cmd->add_option("--mode", mode, "Graph direction")
        ->check(CLI::IsMember({"directed", "undirected"}))
        ->capture_default_str();
    cmd->add_option("--policy", policy, "Edge update policy")
        ->check(CLI::IsMember({"adaptive", "delta", "pivot"}))
        ->capture_default_str();
    cmd->add_option("--leveling", leveling, "Compaction layout (new stores only)")
        ->check(CLI::IsMember({"leveling", "one-leveling"}))
        ->capture_default_str();
    cmd->add_option("--codec", codec, "Adjacency list codec (new stores only)")
        ->check(CLI::IsMember({"raw", "ef"}))
        ->capture_default_str();
    cmd->add_option("--size-ratio", size_ratio, "T")->capture_default_str();
    cmd->add_option("--block-bytes", block_bytes, "B")->capture_default_str();
    cmd->add_option("--memtable-bytes", memtable_bytes)->capture_default_str();
    cmd->add_option("--bloom-bits", bloom_bits, "Bloom filter bits per key")->capture_default_str();
  }

  graph::GraphConfig config() const {
    graph::GraphConfig c;
    c.direction = mode == "directed" ? DirectionMode::kDirected : DirectionMode::kUndirected;
    c.policy = *graph::parse_policy(policy);
    c.codec = codec == "ef" ? CodecMode::kEliasFano : CodecMode::kRaw;
    c.tree.size_ratio = size_ratio;
    c.tree.block_bytes = block_bytes;
    c.tree.memtable_bytes = memtable_bytes;
    c.tree.bloom_bits_per_key = bloom_bits;
    c.tree.leveling = leveling == "leveling" ? LevelingMode::kLeveling : LevelingMode::kOneLeveling;
    return c;
  }
};

void print_io(const lsm::IoCounters& io) {
  std::printf("block_reads %llu\nblock_writes %llu\ncompaction_reads %llu\n",
              static_cast<unsigned long long>(io.block_reads),
              static_cast<unsigned long long>(io.block_writes),
              static_cast<unsigned long long>(io.compaction_reads));
}

std::vector<uint64_t> parse_u64_list(const std::string& s) {
  std::vector<uint64_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    out.push_back(std::stoull(item, &used));
    if (used != item.size()) throw_invalid("bad number in list: " + item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph storage engine benchmark harness"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic edge list");
  uint64_t gen_n = 10000;
  uint64_t gen_m = 160000;
  std::string gen_model = "uniform";
  double gen_exponent = 2.0;
  uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Vertex count")->capture_default_str();
  gen->add_option("--m", gen_m, "Edge count")->capture_default_str();
  gen->add_option("--model", gen_model)->check(CLI::IsMember({"uniform", "powerlaw"}))->capture_default_str();
  gen->add_option("--exponent", gen_exponent, "Power-law exponent")->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--out", gen_out, "Output path (stdout if omitted)");

  // load
  auto* load = app.add_subcommand("load", "Insert an edge-list file edge by edge");
  StoreFlags load_flags;
  std::string load_path;
  load->add_option("path", load_path, "Edge-list file")->required();
  load_flags.add_to(load);

  // workload
  auto* work = app.add_subcommand("workload", "Run a lookup/insert mix against a loaded store");
  StoreFlags work_flags;
  workload::WorkloadSpec spec;
  std::string dist = "uniform";
  std::string out_path;
  std::string dataset = "graph";
  work_flags.add_to(work);
  work->add_option("--theta-lookup", spec.theta_lookup, "Fraction of lookups")->capture_default_str();
  work->add_option("--ops", spec.ops)->capture_default_str();
  work->add_option("--seed", spec.seed)->capture_default_str();
  work->add_option("--dist", dist, "uniform or zipf:EXP")->capture_default_str();
  work->add_option("--threads", spec.reader_threads, "Concurrent reader threads")->capture_default_str();
  work->add_option("--dataset", dataset, "Label for the CSV row")->capture_default_str();
  work->add_option("--out", out_path, "Append the CSV row to this file");

  // predict
  auto* predict = app.add_subcommand("predict", "Print the cost model for both layouts");
  policy::CostParams params;
  params.avg_degree = 32;
  std::string degrees = "0,1,2,4,8,16,19,20,21,25,32,64,128,256";
  predict->add_option("--id-bytes", params.id_bytes)->capture_default_str();
  predict->add_option("--block-bytes", params.block_bytes)->capture_default_str();
  predict->add_option("--size-ratio", params.size_ratio)->capture_default_str();
  predict->add_option("--levels", params.levels)->capture_default_str();
  predict->add_option("--avg-degree", params.avg_degree)->capture_default_str();
  predict->add_option("--theta-lookup", params.theta_lookup)->capture_default_str();
  predict->add_option("--degrees", degrees, "Comma-separated degree grid")->capture_default_str();

  // stats
  auto* stats = app.add_subcommand("stats", "Print store counters and layout");
  StoreFlags stats_flags;
  stats_flags.add_to(stats);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto edges = gen_model == "uniform"
                             ? workload::generate_uniform(gen_n, gen_m, gen_seed)
                             : workload::generate_power_law(gen_n, gen_m, gen_exponent, gen_seed);
      std::ostringstream comment;
      comment << "plsm gen model=" << gen_model << " n=" << gen_n << " m=" << gen_m;
      if (gen_model == "powerlaw") comment << " exponent=" << gen_exponent;
      comment << " seed=" << gen_seed;
      if (gen_out.empty()) {
        std::cout << workload::format_edge_list(edges, comment.str());
      } else {
        workload::write_edge_list(gen_out, edges, comment.str());
      }
    } else if (load->parsed()) {
      const auto edges = workload::read_edge_list(load_path);
      auto store = graph::GraphStore::open(load_flags.data_dir, load_flags.config());
      const auto report = workload::load_edges(*store, edges);
      std::printf("n %llu\nm %llu\navg_degree %.4f\nmean_degree %.4f\nseconds %.3f\n",
                  static_cast<unsigned long long>(report.vertices),
                  static_cast<unsigned long long>(report.edges), report.avg_degree,
                  report.mean_degree, report.seconds);
      print_io(report.io);
      store->close();
    } else if (work->parsed()) {
      const auto parsed = workload::parse_dist(dist);
      if (!parsed) throw_invalid("--dist must be uniform or zipf:EXP");
      spec.dist = parsed->first;
      spec.zipf_exponent = parsed->second;
      auto store = graph::GraphStore::open(work_flags.data_dir, work_flags.config());
      auto state = workload::GraphState::from_store(*store);
      const auto row = workload::run_workload(*store, state, spec, dataset);
      std::cout << workload::csv_header() << '\n' << workload::to_csv(row) << '\n';
      if (!out_path.empty()) {
        std::ifstream probe(out_path);
        const bool fresh = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
        std::ofstream out(out_path, std::ios::app);
        if (!out) throw Error(ErrorCode::kIoError, "cannot write " + out_path);
        if (fresh) out << workload::csv_header() << '\n';
        out << workload::to_csv(row) << '\n';
      }
      store->close();
      if (row.reader_failures > 0) throw Error(ErrorCode::kCorruption, "reader thread saw a lost edge");
    } else if (predict->parsed()) {
      params.theta_update = 1.0 - params.theta_lookup;
      std::cout << workload::predict_report(params, parse_u64_list(degrees));
    } else if (stats->parsed()) {
      auto store = graph::GraphStore::open(stats_flags.data_dir, stats_flags.config());
      const auto census = store->census();
      const auto s = store->stats();
      const double n = census.vertices ? static_cast<double>(census.vertices) : 1.0;
      std::printf("n %llu\nm %llu\navg_degree %.4f\nmean_degree %.4f\nlevels %d\n",
                  static_cast<unsigned long long>(census.vertices),
                  static_cast<unsigned long long>(census.edges),
                  static_cast<double>(census.edges) / n, static_cast<double>(census.half_edges) / n,
                  s.levels);
      for (const auto& level : store->engine().level_info()) {
        std::printf("level %d runs %zu tables %zu bytes %llu entries %llu\n", level.level, level.runs,
                    level.tables, static_cast<unsigned long long>(level.bytes),
                    static_cast<unsigned long long>(level.entries));
      }
      std::printf("sketch_bytes %zu\n", store->sketch().memory_bytes());
      print_io(s.io);
      store->close();
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "plsm: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
