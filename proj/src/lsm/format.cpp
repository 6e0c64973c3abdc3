#include "plsm/lsm/format.hpp"

#include <zlib.h>

#include "plsm/coding.hpp"
#include "plsm/error.hpp"

namespace plsm::lsm::format {

uint32_t crc32(std::string_view data) {
  return static_cast<uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

void append_record(std::string& dst, const Record& r) {
  coding::put_fixed16(dst, static_cast<uint16_t>(r.key.size()));
  dst += r.key;
  coding::put_fixed64(dst, r.seq);
  coding::put_fixed8(dst, static_cast<uint8_t>(r.kind));
  coding::put_fixed32(dst, static_cast<uint32_t>(r.value.size()));
  dst += r.value;
}

std::vector<Record> parse_block(std::string_view block) {
  if (block.size() < kBlockOverhead) throw_corruption("data block too short");
  const auto body = block.substr(0, block.size() - 4);
  if (crc32(body) != coding::decode_fixed32(block.data() + block.size() - 4)) {
    throw_corruption("data block checksum mismatch");
  }
  coding::Reader in(body);
  const uint32_t count = in.fixed32();
  if (count > body.size() / 15) throw_corruption("data block record count");
  std::vector<Record> records(count);
  for (auto& r : records) {
    const uint16_t klen = in.fixed16();
    r.key = std::string(in.bytes(klen));
    r.seq = in.fixed64();
    const uint8_t kind = in.fixed8();
    if (kind > static_cast<uint8_t>(EntryKind::kVertexTombstone)) throw_corruption("record kind");
    r.kind = static_cast<EntryKind>(kind);
    const uint32_t vlen = in.fixed32();
    r.value = std::string(in.bytes(vlen));
  }
  if (!in.empty()) throw_corruption("trailing bytes in data block");
  return records;
}

}  // namespace plsm::lsm::format
