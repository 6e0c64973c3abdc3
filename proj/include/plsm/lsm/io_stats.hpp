#pragma once

#include <atomic>
#include <cstdint>

#include "plsm/lsm/options.hpp"

namespace plsm::lsm {

// Live counters. Query reads and compaction reads are kept apart and summed
// into IoCounters::block_reads by snapshot().
struct IoStats {
  std::atomic<uint64_t> query_reads{0};
  std::atomic<uint64_t> block_writes{0};
  std::atomic<uint64_t> compaction_reads{0};
  std::atomic<uint64_t> lookups{0};
  std::atomic<uint64_t> updates{0};

  IoCounters snapshot() const {
    return {query_reads.load() + compaction_reads.load(), block_writes.load(), compaction_reads.load(),
            lookups.load(), updates.load()};
  }
  void reset() {
    query_reads = 0;
    block_writes = 0;
    compaction_reads = 0;
    lookups = 0;
    updates = 0;
  }
};

}  // namespace plsm::lsm
