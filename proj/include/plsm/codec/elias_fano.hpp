#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace plsm::codec {

struct EfParams {
  uint32_t segment_length = 128;
  // Upper bound on any encoded ID; encode rejects larger values when set.
  std::optional<uint64_t> universe;
};

// Per-segment accounting reported by the encoder. `count` excludes the
// segment's first element, which lives in the first level.
struct EfSegmentLayout {
  uint64_t count = 0;
  uint64_t sub_universe = 0;
  unsigned lower_bits = 0;
  uint64_t payload_bits = 0;
};

struct EfLayout {
  uint64_t header_bits = 0;
  uint64_t first_level_count = 0;
  uint64_t first_level_universe = 0;
  uint64_t first_level_bits = 0;
  std::vector<EfSegmentLayout> segments;

  uint64_t total_bits() const {
    uint64_t total = header_bits + first_level_bits;
    for (const auto& s : segments) total += s.payload_bits;
    return total;
  }
};

// An encoded list: `bytes` holds ceil(bit_length / 8) bytes, the tail of the
// last byte zero-padded.
struct EfBitstream {
  std::string bytes;
  uint64_t bit_length = 0;
};

// Smallest l >= 0 with count * 2^l >= universe; 0 when count == 0.
unsigned ef_lower_bits(uint64_t count, uint64_t universe);

EfBitstream ef_encode(std::span<const uint64_t> ids, const EfParams& params = {});
EfLayout ef_layout(std::span<const uint64_t> ids, const EfParams& params = {});
uint64_t ef_encoded_size_bits(std::span<const uint64_t> ids, const EfParams& params = {});

// Decodes a stream produced by ef_encode. Throws Error(kCorruption) on any
// malformed input; never reads outside `bytes`.
std::vector<uint64_t> ef_decode(std::string_view bytes);

}  // namespace plsm::codec
