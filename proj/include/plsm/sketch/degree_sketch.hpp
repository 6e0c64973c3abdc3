#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "plsm/types.hpp"

namespace plsm::sketch {

// SplitMix64: a counter-based generator, so the full state is one word and
// trivially persisted.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed = 0) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t state() const { return state_; }
  void set_state(uint64_t s) { state_ = s; }

 private:
  uint64_t state_;
};

// Per-vertex 8-bit Morris-style counter: high nibble is the exponent E, low
// nibble the mantissa M. An increment lands with probability 2^-E; the
// mantissa carries into the exponent by plain binary addition. 255 is
// terminal (saturated).
//
// Not internally synchronized; the graph store calls it under its writer lock.
class DegreeSketch {
 public:
  static constexpr uint8_t kSaturated = 0xff;
  static constexpr VertexId kMaxVertex = (VertexId{1} << 32) - 1;

  explicit DegreeSketch(uint64_t seed = 0) : rng_(seed) {}

  void increment(VertexId u);
  uint64_t estimate(VertexId u) const { return decode(cell(u)); }
  bool is_saturated(VertexId u) const { return cell(u) == kSaturated; }

  uint8_t cell(VertexId u) const { return u < cells_.size() ? cells_[u] : 0; }
  void set_cell(VertexId u, uint8_t value);

  size_t capacity() const { return cells_.size(); }
  size_t memory_bytes() const { return cells_.size(); }

  // (2^E - 1) * 16 + 2^E * M
  static constexpr uint64_t decode(uint8_t cell) {
    const uint64_t e = cell >> 4;
    const uint64_t m = cell & 0x0f;
    return ((uint64_t{1} << e) - 1) * 16 + (uint64_t{1} << e) * m;
  }

  // "PLSMDSK1" | u64 cell count | u64 rng state | cells
  std::string serialize() const;
  static DegreeSketch deserialize(std::string_view bytes);

  bool operator==(const DegreeSketch& other) const { return cells_ == other.cells_; }

 private:
  void grow_to(VertexId u);

  std::vector<uint8_t> cells_;
  SplitMix64 rng_;
};

}  // namespace plsm::sketch
