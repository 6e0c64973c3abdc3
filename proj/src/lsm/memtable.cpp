#include "plsm/lsm/memtable.hpp"

#include <mutex>

namespace plsm::lsm {

void MemTable::add(Record r) {
  std::unique_lock lock(mu_);
  auto it = table_.find(r.key);
  if (it == table_.end()) {
    it = table_.emplace(r.key, std::vector<Record>{}).first;
  } else if (r.kind != EntryKind::kDelta) {
    for (const auto& old : it->second) bytes_ -= old.encoded_size();
    it->second.clear();
  }
  bytes_ += r.encoded_size();
  it->second.push_back(std::move(r));
}

std::vector<Record> MemTable::chain(std::string_view key) const {
  std::shared_lock lock(mu_);
  auto it = table_.find(key);
  if (it == table_.end()) return {};
  return {it->second.rbegin(), it->second.rend()};
}

std::vector<Record> MemTable::snapshot() const {
  std::shared_lock lock(mu_);
  std::vector<Record> out;
  for (const auto& [key, records] : table_) out.insert(out.end(), records.rbegin(), records.rend());
  return out;
}

std::vector<Record> MemTable::snapshot_range(std::string_view lo, std::string_view hi) const {
  std::shared_lock lock(mu_);
  std::vector<Record> out;
  for (auto it = table_.lower_bound(lo); it != table_.end() && it->first < hi; ++it) {
    out.insert(out.end(), it->second.rbegin(), it->second.rend());
  }
  return out;
}

uint64_t MemTable::bytes() const {
  std::shared_lock lock(mu_);
  return bytes_;
}

size_t MemTable::key_count() const {
  std::shared_lock lock(mu_);
  return table_.size();
}

bool MemTable::empty() const {
  std::shared_lock lock(mu_);
  return table_.empty();
}

}  // namespace plsm::lsm
