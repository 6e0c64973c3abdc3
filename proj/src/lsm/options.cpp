#include "plsm/lsm/options.hpp"

#include <limits>

#include "plsm/error.hpp"

namespace plsm::lsm {

void TreeConfig::validate() const {
  if (size_ratio < 2) throw_invalid("size_ratio must be >= 2");
  if (block_bytes < 64 || (block_bytes & (block_bytes - 1)) != 0) {
    throw_invalid("block_bytes must be a power of two >= 64");
  }
  if (bloom_bits_per_key < 1) throw_invalid("bloom_bits_per_key must be >= 1");
  if (memtable_bytes < 1024) throw_invalid("memtable_bytes must be >= 1024");
  if (max_key_bytes == 0 || max_key_bytes > 0xffff) throw_invalid("max_key_bytes out of range");
}

uint64_t TreeConfig::level_capacity(int level) const {
  uint64_t cap = memtable_bytes;
  for (int i = 0; i < level; ++i) {
    if (cap > std::numeric_limits<uint64_t>::max() / size_ratio) {
      return std::numeric_limits<uint64_t>::max();
    }
    cap *= size_ratio;
  }
  return cap;
}

}  // namespace plsm::lsm
