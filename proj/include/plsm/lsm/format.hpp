#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "plsm/types.hpp"

// SSTable layout (all integers little-endian, see docs/FORMATS.md):
//
//   data block*   u32 count | record* | u32 crc32
//   record        u16 key_len | key | u64 seq | u8 kind | u32 value_len | value
//   bloom         u32 nbytes | u8 probes | bits | u32 crc32
//   index         u16 len | max_key | u32 count | (u16 len | first_key | u64 offset | u32 length)* | u32 crc32
//   footer        u64 bloom_off | u64 bloom_len | u64 index_off | u64 index_len | u64 entries | "PLSM0001"
namespace plsm::lsm {

struct Record {
  std::string key;
  SequenceNumber seq = 0;
  EntryKind kind = EntryKind::kPivot;
  std::string value;

  size_t encoded_size() const { return 15 + key.size() + value.size(); }
  bool operator==(const Record&) const = default;
};

struct BlockHandle {
  std::string first_key;
  uint64_t offset = 0;
  uint32_t length = 0;
};

namespace format {

inline constexpr size_t kBlockOverhead = 8;
inline constexpr size_t kFooterSize = 48;
inline constexpr std::string_view kMagic = "PLSM0001";

uint32_t crc32(std::string_view data);

void append_record(std::string& dst, const Record& r);

// Verifies the trailing checksum and decodes every record; throws Corruption.
std::vector<Record> parse_block(std::string_view block);

// Number of B-sized blocks a byte range of this length is charged as.
inline uint64_t blocks_for(uint64_t bytes, uint64_t block_bytes) {
  return (bytes + block_bytes - 1) / block_bytes;
}

}  // namespace format
}  // namespace plsm::lsm
