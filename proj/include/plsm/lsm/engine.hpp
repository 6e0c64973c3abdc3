#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plsm/lsm/env.hpp"
#include "plsm/lsm/io_stats.hpp"
#include "plsm/lsm/memtable.hpp"
#include "plsm/lsm/merge_operator.hpp"
#include "plsm/lsm/options.hpp"
#include "plsm/lsm/table.hpp"

namespace plsm::lsm {

struct EngineOptions {
  TreeConfig tree;
  Env* env = nullptr;  // defaults to Env::posix()
  std::shared_ptr<const MergeOperator> merge_operator;
};

// A sorted run: tables with disjoint, ascending key ranges.
using Run = std::vector<TablePtr>;

// Immutable file layout. levels[0] is level 1; runs are newest first. Only
// level 1 in one-leveling mode ever holds more than one run.
struct Version {
  std::vector<std::vector<Run>> levels;

  uint64_t level_bytes(size_t index) const;
  int deepest_level() const;  // 0 when empty
};

struct MergeSource;

struct LevelInfo {
  int level = 0;
  size_t runs = 0;
  size_t tables = 0;
  uint64_t bytes = 0;
  uint64_t entries = 0;
};

// Leveled LSM-tree over byte keys. Mutations are serialized internally;
// readers work on a snapshot of the memtables and the current Version.
class Engine {
 public:
  // Opens or creates the tree under `dir`. An existing MANIFEST's tree
  // configuration wins over the one passed in (auto_compaction excepted).
  static std::unique_ptr<Engine> open(const std::string& dir, EngineOptions options);
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // kind must be Pivot or VertexTombstone.
  SequenceNumber put(std::string_view key, EntryKind kind, std::string_view value);
  SequenceNumber merge(std::string_view key, std::string_view delta);

  // Folded value of the key's chain; VertexTombstone results are returned as
  // such so callers can tell a deleted key from one never written.
  std::optional<Value> get(std::string_view key);

  // Visits the key's records newest first until `visit` returns false or the
  // first Pivot/VertexTombstone has been visited.
  void walk(std::string_view key, const std::function<bool(const Record&)>& visit);

  // Folded values of every key in [lo, hi) whose result is not a tombstone,
  // in key order, until `visit` returns false.
  void scan(std::string_view lo, std::string_view hi,
            const std::function<bool(std::string_view, const Value&)>& visit);

  std::vector<TableMeta> flush_memtable();
  // Merges all of `level` into level+1, whether or not it is over capacity.
  void compact(int level);
  // Flushes, then pushes every record into one run on the deepest level.
  void compact_all();

  IoCounters io_stats() const { return stats_.snapshot(); }
  void reset_stats() { stats_.reset(); }
  int level_count() const;
  std::vector<LevelInfo> level_info() const;
  const TreeConfig& config() const { return config_; }
  const std::string& dir() const { return dir_; }
  Env& env() const { return *env_; }

  // Opaque string persisted in the MANIFEST on the next manifest write.
  void set_app_metadata(std::string data);
  std::string app_metadata() const;

  bool read_only() const { return read_only_; }
  // Flushes the memtable and writes the MANIFEST. Later calls throw kClosed.
  void close();

 private:
  Engine(std::string dir, EngineOptions options);

  struct Snapshot {
    std::shared_ptr<MemTable> mem;
    std::shared_ptr<MemTable> imm;
    std::shared_ptr<const Version> version;
  };
  Snapshot snapshot() const;

  void check_open() const;
  void check_writable() const;
  SequenceNumber add(std::string_view key, EntryKind kind, std::string_view value);
  void maybe_schedule();
  void run_compactions();
  std::vector<TableMeta> flush_locked();
  void compact_locked(size_t index);

  // Merges `sources` into new tables at level `index`+1.
  std::vector<TablePtr> write_run(std::vector<std::unique_ptr<MergeSource>> sources,
                                  int level, bool bottommost);
  Record fold_newest_first(std::vector<Record>& chain) const;

  void load_manifest();
  void write_manifest_locked(const Version& version);
  void install(std::shared_ptr<const Version> next, const std::vector<TablePtr>& obsolete,
               bool drop_imm);
  [[noreturn]] void fail_write(const std::exception& e);

  std::string dir_;
  Env* env_;
  TreeConfig config_;
  std::shared_ptr<const MergeOperator> merge_op_;

  mutable std::mutex write_mu_;
  mutable std::mutex state_mu_;
  std::shared_ptr<MemTable> mem_;
  std::shared_ptr<MemTable> imm_;
  std::shared_ptr<const Version> version_;

  uint64_t next_file_ = 1;
  SequenceNumber last_seq_ = 0;
  std::string app_metadata_;
  std::atomic<bool> closed_{false};
  std::atomic<bool> read_only_{false};
  mutable IoStats stats_;
};

}  // namespace plsm::lsm
