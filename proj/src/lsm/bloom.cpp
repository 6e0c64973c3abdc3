#include "plsm/lsm/bloom.hpp"

#include <algorithm>
#include <cmath>

namespace plsm::lsm {

uint64_t key_hash(std::string_view key) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

BloomFilter BloomFilter::build(const std::vector<uint64_t>& hashes, uint32_t bits_per_key) {
  const auto k = static_cast<uint32_t>(
      std::clamp<long>(std::lround(bits_per_key * std::log(2.0)), 1, 30));
  const size_t bits = std::max<size_t>(64, hashes.size() * bits_per_key);
  const size_t bytes = (bits + 7) / 8;
  std::string array(bytes, '\0');
  const uint64_t nbits = bytes * 8;
  for (uint64_t h : hashes) {
    uint64_t h1 = h & 0xffffffffu;
    const uint64_t h2 = (h >> 32) | 1;
    for (uint32_t i = 0; i < k; ++i) {
      const uint64_t pos = h1 % nbits;
      array[pos / 8] = static_cast<char>(array[pos / 8] | (1 << (pos % 8)));
      h1 += h2;
    }
  }
  return BloomFilter(k, std::move(array));
}

bool BloomFilter::may_contain(uint64_t h) const {
  if (bits_.empty()) return true;
  const uint64_t nbits = bits_.size() * 8;
  uint64_t h1 = h & 0xffffffffu;
  const uint64_t h2 = (h >> 32) | 1;
  for (uint32_t i = 0; i < k_; ++i) {
    const uint64_t pos = h1 % nbits;
    if ((static_cast<uint8_t>(bits_[pos / 8]) & (1 << (pos % 8))) == 0) return false;
    h1 += h2;
  }
  return true;
}

}  // namespace plsm::lsm
