#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "plsm/lsm/format.hpp"

namespace plsm::lsm {

// Sorted write buffer. Each key holds its chain of live records oldest to
// newest; a Pivot or VertexTombstone discards the chain beneath it.
// Internally locked: one writer, many readers.
class MemTable {
 public:
  void add(Record r);

  // Newest first. Empty if the key has no record.
  std::vector<Record> chain(std::string_view key) const;

  // Every record, key ascending and newest first within a key.
  std::vector<Record> snapshot() const;
  std::vector<Record> snapshot_range(std::string_view lo, std::string_view hi) const;

  uint64_t bytes() const;
  size_t key_count() const;
  bool empty() const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, std::vector<Record>, std::less<>> table_;
  uint64_t bytes_ = 0;
};

}  // namespace plsm::lsm
