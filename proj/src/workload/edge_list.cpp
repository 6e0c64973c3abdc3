#include "plsm/workload/edge_list.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "plsm/error.hpp"
#include "plsm/workload/rng.hpp"

namespace plsm::workload {

namespace {

bool parse_id(std::string_view& rest, VertexId& out) {
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), out);
  if (ec != std::errc() || ptr == rest.data()) return false;
  rest.remove_prefix(static_cast<size_t>(ptr - rest.data()));
  return true;
}

uint64_t pair_key(VertexId a, VertexId b, uint64_t n) {
  return a < b ? a * n + b : b * n + a;
}

template <typename Draw>
std::vector<Edge> draw_simple_graph(uint64_t n, uint64_t m, Draw draw) {
  if (n < 2 && m > 0) throw_invalid("need at least two vertices for an edge");
  if (n > (uint64_t{1} << 32)) throw_invalid("vertex count too large");
  if (m > n * (n - 1) / 2) throw_invalid("more edges requested than a simple graph allows");
  std::vector<Edge> edges;
  edges.reserve(m);
  std::unordered_set<uint64_t> seen;
  seen.reserve(m * 2);
  const uint64_t max_attempts = 1000 * m + 1000;
  for (uint64_t attempts = 0; edges.size() < m; ++attempts) {
    if (attempts > max_attempts) throw_invalid("edge sampling failed to find enough distinct pairs");
    const auto [u, v] = draw();
    if (u == v || !seen.insert(pair_key(u, v, n)).second) continue;
    edges.emplace_back(u, v);
  }
  return edges;
}

}  // namespace

std::vector<Edge> parse_edge_list(const std::string& text) {
  std::vector<Edge> edges;
  std::istringstream in(text);
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
    if (rest.empty() || rest.front() == '#') continue;
    Edge e;
    if (!parse_id(rest, e.first) || !parse_id(rest, e.second)) {
      throw_invalid("line " + std::to_string(line_no) + ": expected two vertex ids");
    }
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
    if (!rest.empty()) throw_invalid("line " + std::to_string(line_no) + ": trailing text");
    edges.push_back(e);
  }
  return edges;
}

std::vector<Edge> read_edge_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

std::string format_edge_list(const std::vector<Edge>& edges, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  for (const auto& [u, v] : edges) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

void write_edge_list(const std::string& path, const std::vector<Edge>& edges,
                     const std::string& comment) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << format_edge_list(edges, comment);
  if (!out.flush()) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

std::vector<Edge> generate_uniform(uint64_t n, uint64_t m, uint64_t seed) {
  Rng rng(seed);
  return draw_simple_graph(n, m, [&] { return Edge{rng.below(n), rng.below(n)}; });
}

std::vector<Edge> generate_power_law(uint64_t n, uint64_t m, double exponent, uint64_t seed) {
  if (!(exponent > 1)) throw_invalid("power-law exponent must be > 1");
  std::vector<double> weights(n);
  const double alpha = 1.0 / (exponent - 1.0);
  for (uint64_t i = 0; i < n; ++i) weights[i] = std::pow(static_cast<double>(i + 1), -alpha);
  const WeightedSampler sampler(weights);
  Rng rng(seed);
  return draw_simple_graph(n, m, [&] {
    const VertexId u = sampler.sample(rng);
    const VertexId v = sampler.sample(rng);
    return Edge{u, v};
  });
}

}  // namespace plsm::workload
