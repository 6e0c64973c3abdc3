#include "plsm/sketch/degree_sketch.hpp"

#include <algorithm>

#include "plsm/coding.hpp"
#include "plsm/error.hpp"

namespace plsm::sketch {

namespace {
constexpr std::string_view kMagic = "PLSMDSK1";
}

void DegreeSketch::grow_to(VertexId u) {
  if (u > kMaxVertex) throw_invalid("vertex id beyond degree sketch range");
  if (u < cells_.size()) return;
  size_t capacity = std::max<size_t>(cells_.size(), 64);
  while (capacity <= u) capacity *= 2;
  cells_.resize(capacity, 0);
}

void DegreeSketch::increment(VertexId u) {
  grow_to(u);
  uint8_t& c = cells_[u];
  if (c == kSaturated) return;
  const unsigned e = c >> 4;
  // Probability 2^-e: the low e bits of a uniform word are all zero.
  if (e == 0 || (rng_.next() & ((uint64_t{1} << e) - 1)) == 0) ++c;
}

void DegreeSketch::set_cell(VertexId u, uint8_t value) {
  grow_to(u);
  cells_[u] = value;
}

std::string DegreeSketch::serialize() const {
  std::string out(kMagic);
  coding::put_fixed64(out, cells_.size());
  coding::put_fixed64(out, rng_.state());
  out.append(reinterpret_cast<const char*>(cells_.data()), cells_.size());
  return out;
}

DegreeSketch DegreeSketch::deserialize(std::string_view bytes) {
  coding::Reader in(bytes);
  if (in.bytes(kMagic.size()) != kMagic) throw_corruption("degree sketch magic");
  const uint64_t count = in.fixed64();
  const uint64_t state = in.fixed64();
  if (count != in.remaining()) throw_corruption("degree sketch length");
  DegreeSketch sketch;
  sketch.rng_.set_state(state);
  auto raw = in.bytes(count);
  sketch.cells_.assign(raw.begin(), raw.end());
  return sketch;
}

}  // namespace plsm::sketch
