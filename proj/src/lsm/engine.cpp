#include "plsm/lsm/engine.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "json.hpp"
#include "plsm/error.hpp"

namespace plsm::lsm {

using json = nlohmann::json;

namespace {

constexpr const char* kManifestName = "MANIFEST";

}  // namespace

struct MergeSource {
  virtual ~MergeSource() = default;
  virtual bool valid() const = 0;
  virtual const Record& current() const = 0;
  virtual void next() = 0;
};

namespace {

class VectorSource final : public MergeSource {
 public:
  explicit VectorSource(std::vector<Record> records) : records_(std::move(records)) {}
  bool valid() const override { return pos_ < records_.size(); }
  const Record& current() const override { return records_[pos_]; }
  void next() override { ++pos_; }

 private:
  std::vector<Record> records_;
  size_t pos_ = 0;
};

class RunSource final : public MergeSource {
 public:
  RunSource(Run run, std::atomic<uint64_t>& reads, std::string lo = {})
      : run_(std::move(run)), reads_(reads), lo_(std::move(lo)) {
    auto it = std::lower_bound(run_.begin(), run_.end(), lo_, [](const TablePtr& t, const std::string& k) {
      return t->meta().max_key < k;
    });
    table_ = static_cast<size_t>(it - run_.begin());
    open_table();
  }
  bool valid() const override { return iter_ && iter_->valid(); }
  const Record& current() const override { return iter_->current(); }
  void next() override {
    iter_->next();
    if (!iter_->valid()) {
      ++table_;
      open_table();
    }
  }

 private:
  void open_table() {
    iter_.reset();
    while (table_ < run_.size()) {
      iter_.emplace(run_[table_], reads_, lo_);
      if (iter_->valid()) return;
      ++table_;
    }
    iter_.reset();
  }

  Run run_;
  std::atomic<uint64_t>& reads_;
  std::string lo_;
  size_t table_ = 0;
  std::optional<TableIterator> iter_;
};

// Pops same-key chains (newest first) in key order from a set of sources.
class ChainMerger {
 public:
  explicit ChainMerger(std::vector<std::unique_ptr<MergeSource>> sources)
      : sources_(std::move(sources)) {
    for (size_t i = 0; i < sources_.size(); ++i) {
      if (sources_[i]->valid()) heap_.push(i);
    }
  }

  bool done() const { return heap_.empty(); }
  const std::string& next_key() const { return sources_[heap_.top()]->current().key; }

  std::vector<Record> pop_chain() {
    std::vector<Record> chain;
    const std::string key = next_key();
    while (!heap_.empty() && sources_[heap_.top()]->current().key == key) {
      const size_t i = heap_.top();
      heap_.pop();
      chain.push_back(sources_[i]->current());
      sources_[i]->next();
      if (sources_[i]->valid()) heap_.push(i);
    }
    return chain;
  }

 private:
  struct Later {
    const std::vector<std::unique_ptr<MergeSource>>* sources;
    bool operator()(size_t a, size_t b) const {
      const Record& x = (*sources)[a]->current();
      const Record& y = (*sources)[b]->current();
      if (x.key != y.key) return x.key > y.key;
      return x.seq < y.seq;
    }
  };

  std::vector<std::unique_ptr<MergeSource>> sources_;
  std::priority_queue<size_t, std::vector<size_t>, Later> heap_{Later{&sources_}};
};

json config_to_json(const TreeConfig& c) {
  return {{"size_ratio", c.size_ratio},
          {"block_bytes", c.block_bytes},
          {"memtable_bytes", c.memtable_bytes},
          {"bloom_bits_per_key", c.bloom_bits_per_key},
          {"leveling", to_string(c.leveling)},
          {"target_file_bytes", c.target_file_bytes},
          {"max_key_bytes", c.max_key_bytes}};
}

TreeConfig config_from_json(const json& j, bool auto_compaction) {
  TreeConfig c;
  c.size_ratio = j.at("size_ratio").get<uint32_t>();
  c.block_bytes = j.at("block_bytes").get<uint32_t>();
  c.memtable_bytes = j.at("memtable_bytes").get<uint64_t>();
  c.bloom_bits_per_key = j.at("bloom_bits_per_key").get<uint32_t>();
  const auto mode = j.at("leveling").get<std::string>();
  if (mode == "leveling") {
    c.leveling = LevelingMode::kLeveling;
  } else if (mode == "one-leveling") {
    c.leveling = LevelingMode::kOneLeveling;
  } else {
    throw_corruption("unknown leveling mode in MANIFEST: " + mode);
  }
  c.target_file_bytes = j.at("target_file_bytes").get<uint64_t>();
  c.max_key_bytes = j.at("max_key_bytes").get<uint32_t>();
  c.auto_compaction = auto_compaction;
  return c;
}

}  // namespace

uint64_t Version::level_bytes(size_t index) const {
  if (index >= levels.size()) return 0;
  uint64_t total = 0;
  for (const auto& run : levels[index]) {
    for (const auto& t : run) total += t->meta().byte_size;
  }
  return total;
}

int Version::deepest_level() const {
  for (size_t i = levels.size(); i > 0; --i) {
    if (!levels[i - 1].empty()) return static_cast<int>(i);
  }
  return 0;
}

Engine::Engine(std::string dir, EngineOptions options)
    : dir_(std::move(dir)),
      env_(options.env ? options.env : &Env::posix()),
      config_(options.tree),
      merge_op_(std::move(options.merge_operator)),
      mem_(std::make_shared<MemTable>()),
      version_(std::make_shared<Version>()) {}

std::unique_ptr<Engine> Engine::open(const std::string& dir, EngineOptions options) {
  options.tree.validate();
  std::unique_ptr<Engine> engine(new Engine(dir, std::move(options)));
  engine->load_manifest();
  return engine;
}

Engine::~Engine() {
  try {
    close();
  } catch (const std::exception&) {
    // Destructors cannot report; callers wanting the error call close().
  }
}

void Engine::load_manifest() {
  const std::string path = join_path(dir_, kManifestName);
  if (!env_->exists(path)) {
    env_->create_dir(dir_);
    write_manifest_locked(*version_);
    return;
  }
  json j;
  try {
    j = json::parse(env_->read_file(path));
    config_ = config_from_json(j.at("config"), config_.auto_compaction);
    config_.validate();
    next_file_ = j.at("next_file").get<uint64_t>();
    last_seq_ = j.at("last_seq").get<uint64_t>();
    app_metadata_ = j.value("app", std::string{});
  } catch (const json::exception& e) {
    throw_corruption(std::string("unreadable MANIFEST: ") + e.what());
  }

  auto version = std::make_shared<Version>();
  std::set<std::string> live;
  try {
    int level = 1;
    for (const auto& jl : j.at("levels")) {
      auto& runs = version->levels.emplace_back();
      for (const auto& jr : jl) {
        Run run;
        for (const auto& id : jr) {
          const auto file_id = id.get<uint64_t>();
          if (file_id >= next_file_) throw_corruption("MANIFEST lists a file id past next_file");
          run.push_back(Table::open(*env_, dir_, file_id, level, config_.block_bytes));
          live.insert(table_file_name(file_id));
        }
        if (!run.empty()) runs.push_back(std::move(run));
      }
      ++level;
    }
  } catch (const json::exception& e) {
    throw_corruption(std::string("malformed MANIFEST levels: ") + e.what());
  }
  version_ = std::move(version);

  for (const auto& name : env_->list_dir(dir_)) {
    const bool table = name.size() > 4 && name.compare(name.size() - 4, 4, ".sst") == 0;
    if ((table && !live.count(name)) || name == std::string(kManifestName) + ".tmp") {
      env_->remove(join_path(dir_, name));
    }
  }
}

void Engine::write_manifest_locked(const Version& version) {
  json levels = json::array();
  for (const auto& runs : version.levels) {
    json jl = json::array();
    for (const auto& run : runs) {
      json jr = json::array();
      for (const auto& t : run) jr.push_back(t->meta().file_id);
      jl.push_back(std::move(jr));
    }
    levels.push_back(std::move(jl));
  }
  json j = {{"format", 1},
            {"config", config_to_json(config_)},
            {"next_file", next_file_},
            {"last_seq", last_seq_},
            {"levels", std::move(levels)},
            {"app", app_metadata_}};
  env_->write_file_atomic(join_path(dir_, kManifestName), j.dump(1));
}

Engine::Snapshot Engine::snapshot() const {
  std::lock_guard lock(state_mu_);
  return {mem_, imm_, version_};
}

void Engine::check_open() const {
  if (closed_) throw Error(ErrorCode::kClosed, "engine is closed");
}

void Engine::check_writable() const {
  check_open();
  if (read_only_) throw Error(ErrorCode::kReadOnly, "engine is read-only after a write failure");
}

void Engine::fail_write(const std::exception& e) {
  read_only_ = true;
  if (const auto* err = dynamic_cast<const Error*>(&e)) throw *err;
  throw Error(ErrorCode::kIoError, e.what());
}

SequenceNumber Engine::put(std::string_view key, EntryKind kind, std::string_view value) {
  if (kind == EntryKind::kDelta) throw_invalid("put takes Pivot or VertexTombstone; use merge");
  if (kind == EntryKind::kVertexTombstone && !value.empty()) {
    throw_invalid("tombstones carry no value");
  }
  return add(key, kind, value);
}

SequenceNumber Engine::merge(std::string_view key, std::string_view delta) {
  if (!merge_op_) throw_invalid("merge requires a merge operator");
  merge_op_->validate_delta(delta);
  return add(key, EntryKind::kDelta, delta);
}

SequenceNumber Engine::add(std::string_view key, EntryKind kind, std::string_view value) {
  if (key.empty() || key.size() > config_.max_key_bytes) throw_invalid("key length out of range");
  std::lock_guard lock(write_mu_);
  check_writable();
  const SequenceNumber seq = ++last_seq_;
  mem_->add(Record{std::string(key), seq, kind, std::string(value)});
  ++stats_.updates;
  maybe_schedule();
  return seq;
}

void Engine::maybe_schedule() {
  if (!config_.auto_compaction || mem_->bytes() < config_.memtable_bytes) return;
  flush_locked();
  run_compactions();
}

void Engine::walk(std::string_view key, const std::function<bool(const Record&)>& visit) {
  check_open();
  ++stats_.lookups;
  const Snapshot snap = snapshot();
  auto step = [&](const Record& r) { return visit(r) && r.kind == EntryKind::kDelta; };

  for (const auto* mem : {snap.mem.get(), snap.imm.get()}) {
    if (!mem) continue;
    for (const auto& r : mem->chain(key)) {
      if (!step(r)) return;
    }
  }
  const uint64_t hash = key_hash(key);
  for (const auto& runs : snap.version->levels) {
    for (const auto& run : runs) {
      auto it = std::lower_bound(run.begin(), run.end(), key, [](const TablePtr& t, std::string_view k) {
        return t->meta().max_key < k;
      });
      if (it == run.end() || !(*it)->in_range(key) || !(*it)->may_contain(hash)) continue;
      if (auto r = (*it)->get(key, stats_.query_reads)) {
        if (!step(*r)) return;
      }
    }
  }
}

Record Engine::fold_newest_first(std::vector<Record>& chain) const {
  size_t base = 0;
  while (base < chain.size() && chain[base].kind == EntryKind::kDelta) ++base;
  if (base == 0 || (base == 1 && chain.size() == 1)) return std::move(chain[0]);
  if (!merge_op_) throw_corruption("delta record found without a merge operator");

  std::vector<std::string_view> deltas;
  deltas.reserve(base);
  for (size_t i = base; i > 0; --i) deltas.push_back(chain[i - 1].value);
  Value base_value;
  const Value* base_ptr = nullptr;
  if (base < chain.size()) {
    base_value = {chain[base].kind, chain[base].value};
    base_ptr = &base_value;
  }
  Value folded = merge_op_->fold(base_ptr, deltas);
  return Record{std::move(chain[0].key), chain[0].seq, folded.kind, std::move(folded.bytes)};
}

std::optional<Value> Engine::get(std::string_view key) {
  std::vector<Record> chain;
  walk(key, [&](const Record& r) {
    chain.push_back(r);
    return true;
  });
  if (chain.empty()) return std::nullopt;
  Record r = fold_newest_first(chain);
  return Value{r.kind, std::move(r.value)};
}

void Engine::scan(std::string_view lo, std::string_view hi,
                  const std::function<bool(std::string_view, const Value&)>& visit) {
  check_open();
  const Snapshot snap = snapshot();
  std::vector<std::unique_ptr<MergeSource>> sources;
  sources.push_back(std::make_unique<VectorSource>(snap.mem->snapshot_range(lo, hi)));
  if (snap.imm) sources.push_back(std::make_unique<VectorSource>(snap.imm->snapshot_range(lo, hi)));
  for (const auto& runs : snap.version->levels) {
    for (const auto& run : runs) {
      sources.push_back(std::make_unique<RunSource>(run, stats_.query_reads, std::string(lo)));
    }
  }
  ChainMerger merger(std::move(sources));
  while (!merger.done() && merger.next_key() < hi) {
    auto chain = merger.pop_chain();
    Record r = fold_newest_first(chain);
    if (r.kind == EntryKind::kVertexTombstone) continue;
    if (!visit(r.key, Value{r.kind, std::move(r.value)})) return;
  }
}

std::vector<TablePtr> Engine::write_run(std::vector<std::unique_ptr<MergeSource>> sources,
                                        int level, bool bottommost) {
  std::vector<TablePtr> out;
  std::unique_ptr<TableBuilder> builder;
  std::string path;

  auto finish = [&] {
    auto result = builder->finish();
    builder.reset();
    result.meta.level = level;
    stats_.block_writes += format::blocks_for(result.meta.byte_size, config_.block_bytes);
    out.push_back(std::make_shared<Table>(*env_, path, env_->open_random(path),
                                          std::move(result.meta), std::move(result.bloom),
                                          std::move(result.index), config_.block_bytes));
  };

  ChainMerger merger(std::move(sources));
  while (!merger.done()) {
    auto chain = merger.pop_chain();
    Record r = fold_newest_first(chain);
    if (bottommost && r.kind != EntryKind::kPivot) {
      std::optional<Value> resolved;
      if (merge_op_) resolved = merge_op_->resolve_at_bottom(Value{r.kind, std::move(r.value)});
      if (!resolved) continue;
      r.kind = resolved->kind;
      r.value = std::move(resolved->bytes);
    }
    if (!builder) {
      const uint64_t id = next_file_++;
      path = join_path(dir_, table_file_name(id));
      builder = std::make_unique<TableBuilder>(env_->new_writable(path), id, config_);
    }
    builder->add(r);
    if (builder->estimated_size() >= config_.file_target()) finish();
  }
  if (builder) finish();
  return out;
}

void Engine::install(std::shared_ptr<const Version> next, const std::vector<TablePtr>& obsolete,
                     bool drop_imm) {
  {
    std::lock_guard lock(state_mu_);
    version_ = std::move(next);
    if (drop_imm) imm_.reset();
  }
  for (const auto& t : obsolete) t->mark_obsolete();
}

std::vector<TableMeta> Engine::flush_locked() {
  if (mem_->empty()) return {};
  {
    std::lock_guard lock(state_mu_);
    imm_ = mem_;
    mem_ = std::make_shared<MemTable>();
  }
  try {
    const auto current = version_;
    const bool leveling = config_.leveling == LevelingMode::kLeveling;
    std::vector<std::unique_ptr<MergeSource>> sources;
    sources.push_back(std::make_unique<VectorSource>(imm_->snapshot()));
    std::vector<TablePtr> obsolete;
    if (leveling && !current->levels.empty()) {
      for (const auto& run : current->levels[0]) {
        sources.push_back(std::make_unique<RunSource>(run, stats_.compaction_reads));
        obsolete.insert(obsolete.end(), run.begin(), run.end());
      }
    }
    const int deepest = current->deepest_level();
    const bool bottommost = leveling ? deepest <= 1 : deepest == 0;
    auto tables = write_run(std::move(sources), 1, bottommost);

    auto next = std::make_shared<Version>(*current);
    if (next->levels.empty()) next->levels.emplace_back();
    if (leveling) next->levels[0].clear();
    if (!tables.empty()) next->levels[0].insert(next->levels[0].begin(), tables);
    write_manifest_locked(*next);
    install(next, obsolete, true);

    std::vector<TableMeta> metas;
    for (const auto& t : tables) metas.push_back(t->meta());
    return metas;
  } catch (const std::exception& e) {
    fail_write(e);
  }
}

void Engine::compact_locked(size_t index) {
  const auto current = version_;
  if (index >= current->levels.size() || current->levels[index].empty()) return;
  try {
    std::vector<std::unique_ptr<MergeSource>> sources;
    std::vector<TablePtr> obsolete;
    for (size_t li : {index, index + 1}) {
      if (li >= current->levels.size()) continue;
      for (const auto& run : current->levels[li]) {
        sources.push_back(std::make_unique<RunSource>(run, stats_.compaction_reads));
        obsolete.insert(obsolete.end(), run.begin(), run.end());
      }
    }
    const bool bottommost = current->deepest_level() <= static_cast<int>(index) + 2;
    auto tables = write_run(std::move(sources), static_cast<int>(index) + 2, bottommost);

    auto next = std::make_shared<Version>(*current);
    if (next->levels.size() < index + 2) next->levels.resize(index + 2);
    next->levels[index].clear();
    next->levels[index + 1].clear();
    if (!tables.empty()) next->levels[index + 1].push_back(std::move(tables));
    while (!next->levels.empty() && next->levels.back().empty()) next->levels.pop_back();
    write_manifest_locked(*next);
    install(next, obsolete, false);
  } catch (const std::exception& e) {
    fail_write(e);
  }
}

void Engine::run_compactions() {
  for (;;) {
    const auto current = version_;
    std::optional<size_t> target;
    for (size_t i = 0; i < current->levels.size(); ++i) {
      if (current->level_bytes(i) > config_.level_capacity(static_cast<int>(i) + 1)) {
        target = i;
        break;
      }
    }
    if (!target) return;
    compact_locked(*target);
  }
}

std::vector<TableMeta> Engine::flush_memtable() {
  std::lock_guard lock(write_mu_);
  check_writable();
  auto metas = flush_locked();
  if (config_.auto_compaction) run_compactions();
  return metas;
}

void Engine::compact(int level) {
  if (level < 1) throw_invalid("levels are numbered from 1");
  std::lock_guard lock(write_mu_);
  check_writable();
  compact_locked(static_cast<size_t>(level - 1));
  if (config_.auto_compaction) run_compactions();
}

void Engine::compact_all() {
  std::lock_guard lock(write_mu_);
  check_writable();
  flush_locked();
  const int deepest = version_->deepest_level();
  if (deepest == 0) return;
  for (int i = 0; i + 1 < deepest; ++i) compact_locked(static_cast<size_t>(i));
  const auto& last = version_->levels[static_cast<size_t>(deepest) - 1];
  if (deepest == 1 || last.size() > 1) compact_locked(static_cast<size_t>(deepest) - 1);
}

int Engine::level_count() const {
  return std::max(1, snapshot().version->deepest_level());
}

std::vector<LevelInfo> Engine::level_info() const {
  const auto version = snapshot().version;
  std::vector<LevelInfo> out;
  for (size_t i = 0; i < version->levels.size(); ++i) {
    LevelInfo info;
    info.level = static_cast<int>(i) + 1;
    info.runs = version->levels[i].size();
    for (const auto& run : version->levels[i]) {
      info.tables += run.size();
      for (const auto& t : run) {
        info.bytes += t->meta().byte_size;
        info.entries += t->meta().entry_count;
      }
    }
    out.push_back(info);
  }
  return out;
}

void Engine::set_app_metadata(std::string data) {
  std::lock_guard lock(write_mu_);
  app_metadata_ = std::move(data);
}

std::string Engine::app_metadata() const {
  std::lock_guard lock(write_mu_);
  return app_metadata_;
}

void Engine::close() {
  std::lock_guard lock(write_mu_);
  if (closed_) return;
  if (read_only_) {
    closed_ = true;
    return;
  }
  try {
    flush_locked();
    write_manifest_locked(*version_);
  } catch (...) {
    closed_ = true;
    throw;
  }
  closed_ = true;
}

}  // namespace plsm::lsm
