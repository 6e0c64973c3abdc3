#pragma once

#include <cstdint>

#include "plsm/types.hpp"

namespace plsm::lsm {

struct TreeConfig {
  uint32_t size_ratio = 10;                  // T
  uint32_t block_bytes = 4096;               // B
  uint64_t memtable_bytes = 4ull << 20;
  uint32_t bloom_bits_per_key = 10;
  LevelingMode leveling = LevelingMode::kOneLeveling;
  uint64_t target_file_bytes = 0;            // 0 means memtable_bytes
  uint32_t max_key_bytes = 1024;
  // Run flush and compaction on the writing thread as soon as a threshold is
  // crossed. When false, only explicit flush/compact calls move data.
  bool auto_compaction = true;

  void validate() const;
  uint64_t file_target() const { return target_file_bytes ? target_file_bytes : memtable_bytes; }
  // memtable_bytes * T^level
  uint64_t level_capacity(int level) const;
};

struct IoCounters {
  uint64_t block_reads = 0;        // every block fetched: lookups, scans, compactions
  uint64_t block_writes = 0;       // ceil(file_bytes / B) per table written
  uint64_t compaction_reads = 0;   // the part of block_reads streamed in by compactions
  uint64_t lookups = 0;
  uint64_t updates = 0;

  uint64_t total_io() const { return block_reads + block_writes; }

  IoCounters operator-(const IoCounters& o) const {
    return {block_reads - o.block_reads, block_writes - o.block_writes,
            compaction_reads - o.compaction_reads, lookups - o.lookups, updates - o.updates};
  }
};

}  // namespace plsm::lsm
