#include "plsm/lsm/table.hpp"

#include <algorithm>
#include <cstdio>

#include "plsm/coding.hpp"
#include "plsm/error.hpp"

namespace plsm::lsm {

std::string table_file_name(uint64_t file_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06llu.sst", static_cast<unsigned long long>(file_id));
  return buf;
}

TableBuilder::TableBuilder(std::unique_ptr<WritableFile> file, uint64_t file_id,
                           const TreeConfig& config)
    : file_(std::move(file)),
      file_id_(file_id),
      block_bytes_(config.block_bytes),
      bloom_bits_(config.bloom_bits_per_key) {}

void TableBuilder::add(const Record& r) {
  if (entries_ > 0 && r.key <= last_key_) throw_invalid("table keys must be strictly ascending");
  if (r.key.size() > 0xffff) throw_invalid("key too long for table format");
  const size_t size = r.encoded_size();
  const bool oversized = size + format::kBlockOverhead > block_bytes_;
  if (block_count_ > 0 &&
      (oversized || block_.size() + size + format::kBlockOverhead > block_bytes_)) {
    flush_block();
  }
  if (block_count_ == 0) block_first_key_ = r.key;
  format::append_record(block_, r);
  ++block_count_;
  if (oversized) flush_block();

  if (entries_ == 0) min_key_ = r.key;
  last_key_ = r.key;
  hashes_.push_back(key_hash(r.key));
  ++entries_;
}

void TableBuilder::flush_block() {
  if (block_count_ == 0) return;
  std::string out;
  out.reserve(block_.size() + format::kBlockOverhead);
  coding::put_fixed32(out, block_count_);
  out += block_;
  coding::put_fixed32(out, format::crc32(out));
  file_->append(out);
  index_.push_back({block_first_key_, offset_, static_cast<uint32_t>(out.size())});
  offset_ += out.size();
  block_.clear();
  block_count_ = 0;
}

TableBuilder::Result TableBuilder::finish() {
  flush_block();
  Result result;
  result.bloom = BloomFilter::build(hashes_, bloom_bits_);

  std::string bloom;
  coding::put_fixed32(bloom, static_cast<uint32_t>(result.bloom.bits().size()));
  coding::put_fixed8(bloom, static_cast<uint8_t>(result.bloom.num_probes()));
  bloom += result.bloom.bits();
  coding::put_fixed32(bloom, format::crc32(bloom));

  std::string index;
  coding::put_fixed16(index, static_cast<uint16_t>(last_key_.size()));
  index += last_key_;
  coding::put_fixed32(index, static_cast<uint32_t>(index_.size()));
  for (const auto& h : index_) {
    coding::put_fixed16(index, static_cast<uint16_t>(h.first_key.size()));
    index += h.first_key;
    coding::put_fixed64(index, h.offset);
    coding::put_fixed32(index, h.length);
  }
  coding::put_fixed32(index, format::crc32(index));

  const uint64_t bloom_off = offset_;
  const uint64_t index_off = bloom_off + bloom.size();
  std::string footer;
  coding::put_fixed64(footer, bloom_off);
  coding::put_fixed64(footer, bloom.size());
  coding::put_fixed64(footer, index_off);
  coding::put_fixed64(footer, index.size());
  coding::put_fixed64(footer, entries_);
  footer += format::kMagic;

  file_->append(bloom);
  file_->append(index);
  file_->append(footer);
  file_->sync();
  file_->close();

  result.meta.file_id = file_id_;
  result.meta.min_key = min_key_;
  result.meta.max_key = last_key_;
  result.meta.entry_count = entries_;
  result.meta.byte_size = index_off + index.size() + footer.size();
  result.index = std::move(index_);
  return result;
}

Table::Table(Env& env, std::string path, std::shared_ptr<RandomAccessFile> file, TableMeta meta,
             BloomFilter bloom, std::vector<BlockHandle> index, uint32_t block_bytes)
    : env_(env),
      path_(std::move(path)),
      file_(std::move(file)),
      meta_(std::move(meta)),
      bloom_(std::move(bloom)),
      index_(std::move(index)),
      block_bytes_(block_bytes) {}

Table::~Table() {
  if (!obsolete_) return;
  file_.reset();
  try {
    env_.remove(path_);
  } catch (const std::exception&) {
    // An undeletable obsolete file is garbage-collected on the next open.
  }
}

std::shared_ptr<Table> Table::open(Env& env, const std::string& dir, uint64_t file_id, int level,
                                   uint32_t block_bytes) {
  const std::string path = join_path(dir, table_file_name(file_id));
  auto file = env.open_random(path);
  const uint64_t size = file->size();
  if (size < format::kFooterSize) throw_corruption("table too short: " + path);
  const std::string footer = file->read(size - format::kFooterSize, format::kFooterSize);
  coding::Reader f(footer);
  const uint64_t bloom_off = f.fixed64();
  const uint64_t bloom_len = f.fixed64();
  const uint64_t index_off = f.fixed64();
  const uint64_t index_len = f.fixed64();
  const uint64_t entries = f.fixed64();
  if (f.bytes(8) != format::kMagic) throw_corruption("bad table magic: " + path);
  if (bloom_off + bloom_len != index_off || index_off + index_len + format::kFooterSize != size ||
      bloom_len < 9 || index_len < 10) {
    throw_corruption("bad table footer: " + path);
  }

  const std::string bloom_raw = file->read(bloom_off, bloom_len);
  const auto bloom_body = std::string_view(bloom_raw).substr(0, bloom_len - 4);
  if (format::crc32(bloom_body) != coding::decode_fixed32(bloom_raw.data() + bloom_len - 4)) {
    throw_corruption("bloom checksum mismatch: " + path);
  }
  coding::Reader b(bloom_body);
  const uint32_t nbytes = b.fixed32();
  const uint8_t probes = b.fixed8();
  BloomFilter bloom(probes, std::string(b.bytes(nbytes)));

  const std::string index_raw = file->read(index_off, index_len);
  const auto index_body = std::string_view(index_raw).substr(0, index_len - 4);
  if (format::crc32(index_body) != coding::decode_fixed32(index_raw.data() + index_len - 4)) {
    throw_corruption("index checksum mismatch: " + path);
  }
  coding::Reader in(index_body);
  TableMeta meta;
  meta.file_id = file_id;
  meta.level = level;
  meta.max_key = std::string(in.bytes(in.fixed16()));
  const uint32_t count = in.fixed32();
  std::vector<BlockHandle> index(count);
  for (auto& h : index) {
    h.first_key = std::string(in.bytes(in.fixed16()));
    h.offset = in.fixed64();
    h.length = in.fixed32();
    if (h.offset + h.length > bloom_off) throw_corruption("block handle out of range: " + path);
  }
  if (index.empty()) throw_corruption("table without blocks: " + path);
  meta.min_key = index.front().first_key;
  meta.entry_count = entries;
  meta.byte_size = size;
  return std::make_shared<Table>(env, path, std::move(file), std::move(meta), std::move(bloom),
                                 std::move(index), block_bytes);
}

int Table::block_for(std::string_view key) const {
  auto it = std::upper_bound(index_.begin(), index_.end(), key,
                             [](std::string_view k, const BlockHandle& h) { return k < h.first_key; });
  if (it == index_.begin()) return -1;
  return static_cast<int>(it - index_.begin()) - 1;
}

std::vector<Record> Table::read_block(size_t block, std::atomic<uint64_t>& reads) const {
  const auto& h = index_.at(block);
  reads += format::blocks_for(h.length, block_bytes_);
  return format::parse_block(file_->read(h.offset, h.length));
}

std::optional<Record> Table::get(std::string_view key, std::atomic<uint64_t>& reads) const {
  const int block = block_for(key);
  if (block < 0) return std::nullopt;
  auto records = read_block(static_cast<size_t>(block), reads);
  auto it = std::lower_bound(records.begin(), records.end(), key,
                             [](const Record& r, std::string_view k) { return r.key < k; });
  if (it == records.end() || it->key != key) return std::nullopt;
  return std::move(*it);
}

TableIterator::TableIterator(TablePtr table, std::atomic<uint64_t>& reads, std::string_view lo)
    : table_(std::move(table)), reads_(reads) {
  size_t start = 0;
  if (!lo.empty()) start = static_cast<size_t>(std::max(0, table_->block_for(lo)));
  load(start);
  while (valid() && current().key < lo) next();
}

void TableIterator::load(size_t block) {
  block_ = block;
  pos_ = 0;
  records_.clear();
  while (block_ < table_->index().size()) {
    records_ = table_->read_block(block_, reads_);
    if (!records_.empty()) return;
    ++block_;
  }
}

void TableIterator::next() {
  if (++pos_ < records_.size()) return;
  load(block_ + 1);
}

}  // namespace plsm::lsm
