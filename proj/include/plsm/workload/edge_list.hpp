#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "plsm/types.hpp"

namespace plsm::workload {

using Edge = std::pair<VertexId, VertexId>;

// Whitespace-separated "u v" per line; blank lines and lines starting with
// '#' are skipped. Throws InvalidArgument naming the offending line.
std::vector<Edge> parse_edge_list(const std::string& text);
std::vector<Edge> read_edge_list(const std::string& path);

std::string format_edge_list(const std::vector<Edge>& edges, const std::string& comment = {});
void write_edge_list(const std::string& path, const std::vector<Edge>& edges,
                     const std::string& comment = {});

// m distinct edges over vertices 0..n-1, no self-loops. Pairs are distinct
// as unordered pairs, so the result is simple in either direction mode.
std::vector<Edge> generate_uniform(uint64_t n, uint64_t m, uint64_t seed);

// Chung-Lu style: endpoints drawn with probability proportional to
// (i+1)^(-1/(exponent-1)), which yields a degree tail of that exponent.
// Duplicates and self-loops are rejected and redrawn.
std::vector<Edge> generate_power_law(uint64_t n, uint64_t m, double exponent, uint64_t seed);

}  // namespace plsm::workload
