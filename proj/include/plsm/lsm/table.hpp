#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plsm/lsm/bloom.hpp"
#include "plsm/lsm/env.hpp"
#include "plsm/lsm/format.hpp"
#include "plsm/lsm/options.hpp"

namespace plsm::lsm {

struct TableMeta {
  uint64_t file_id = 0;
  int level = 1;
  std::string min_key;
  std::string max_key;
  uint64_t entry_count = 0;
  uint64_t byte_size = 0;
};

std::string table_file_name(uint64_t file_id);

// Streams records (strictly ascending keys) into data blocks of at most
// block_bytes. A record too large for a block gets a dedicated block.
class TableBuilder {
 public:
  TableBuilder(std::unique_ptr<WritableFile> file, uint64_t file_id, const TreeConfig& config);

  void add(const Record& r);
  uint64_t estimated_size() const { return offset_ + block_.size() + format::kBlockOverhead; }
  uint64_t entry_count() const { return entries_; }

  struct Result {
    TableMeta meta;
    BloomFilter bloom;
    std::vector<BlockHandle> index;
  };
  Result finish();

 private:
  void flush_block();

  std::unique_ptr<WritableFile> file_;
  uint64_t file_id_;
  uint32_t block_bytes_;
  uint32_t bloom_bits_;
  uint64_t offset_ = 0;
  std::string block_;
  uint32_t block_count_ = 0;
  std::string block_first_key_;
  std::string last_key_;
  std::vector<BlockHandle> index_;
  std::vector<uint64_t> hashes_;
  uint64_t entries_ = 0;
  std::string min_key_;
};

// Immutable table reader. Index and bloom filter stay in memory; data blocks
// are fetched on demand and charged to the supplied counter. Deletes its file
// on destruction once marked obsolete.
class Table {
 public:
  Table(Env& env, std::string path, std::shared_ptr<RandomAccessFile> file, TableMeta meta,
        BloomFilter bloom, std::vector<BlockHandle> index, uint32_t block_bytes);
  ~Table();

  Table(const Table&) = delete;
  Table& operator=(const Table&) = delete;

  // Reads footer, bloom and index from disk (not charged as block reads).
  static std::shared_ptr<Table> open(Env& env, const std::string& dir, uint64_t file_id, int level,
                                     uint32_t block_bytes);

  const TableMeta& meta() const { return meta_; }
  const std::vector<BlockHandle>& index() const { return index_; }
  const BloomFilter& bloom() const { return bloom_; }

  bool in_range(std::string_view key) const { return key >= meta_.min_key && key <= meta_.max_key; }
  bool may_contain(uint64_t hash) const { return bloom_.may_contain(hash); }

  std::optional<Record> get(std::string_view key, std::atomic<uint64_t>& reads) const;

  // Index of the only block that can hold `key`, or -1.
  int block_for(std::string_view key) const;
  std::vector<Record> read_block(size_t block, std::atomic<uint64_t>& reads) const;

  void mark_obsolete() const { obsolete_ = true; }

 private:
  Env& env_;
  std::string path_;
  std::shared_ptr<RandomAccessFile> file_;
  TableMeta meta_;
  BloomFilter bloom_;
  std::vector<BlockHandle> index_;
  uint32_t block_bytes_;
  mutable std::atomic<bool> obsolete_{false};
};

using TablePtr = std::shared_ptr<const Table>;

// Sequential cursor over one table starting at the first key >= lo.
class TableIterator {
 public:
  TableIterator(TablePtr table, std::atomic<uint64_t>& reads, std::string_view lo = {});

  bool valid() const { return block_ < table_->index().size(); }
  const Record& current() const { return records_[pos_]; }
  void next();

 private:
  void load(size_t block);

  TablePtr table_;
  std::atomic<uint64_t>& reads_;
  size_t block_ = 0;
  std::vector<Record> records_;
  size_t pos_ = 0;
};

}  // namespace plsm::lsm
