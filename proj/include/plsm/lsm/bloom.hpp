#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace plsm::lsm {

// 64-bit FNV-1a followed by a murmur finalizer. Fixed here (not std::hash) so
// table files are reproducible across toolchains.
uint64_t key_hash(std::string_view key);

// Standard bloom filter with k = round(bits_per_key * ln 2) probes generated
// by double hashing from one 64-bit key hash.
class BloomFilter {
 public:
  BloomFilter() = default;
  BloomFilter(uint32_t num_probes, std::string bits) : k_(num_probes), bits_(std::move(bits)) {}

  static BloomFilter build(const std::vector<uint64_t>& hashes, uint32_t bits_per_key);

  bool may_contain(uint64_t hash) const;

  uint32_t num_probes() const { return k_; }
  const std::string& bits() const { return bits_; }
  size_t bit_count() const { return bits_.size() * 8; }

 private:
  uint32_t k_ = 1;
  std::string bits_;
};

}  // namespace plsm::lsm
