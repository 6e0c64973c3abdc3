#include "plsm/graph/entries.hpp"

#include <algorithm>
#include <iterator>

#include "plsm/codec/elias_fano.hpp"
#include "plsm/coding.hpp"
#include "plsm/error.hpp"

namespace plsm::graph {

namespace {

using Ids = std::vector<VertexId>;

Ids set_union(const Ids& a, const Ids& b) {
  Ids out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Ids set_minus(const Ids& a, const Ids& b) {
  if (b.empty()) return a;
  Ids out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool strictly_ascending(const Ids& ids) {
  return std::adjacent_find(ids.begin(), ids.end(), std::greater_equal<>()) == ids.end();
}

bool disjoint(const Ids& a, const Ids& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i;
    else ++j;
  }
  return true;
}

LabeledList merge_labeled(const LabeledList& older, const LabeledList& newer, bool keep_removes) {
  LabeledList out;
  out.adds = set_union(set_minus(older.adds, newer.removes), newer.adds);
  if (keep_removes) out.removes = set_union(set_minus(older.removes, newer.adds), newer.removes);
  return out;
}

constexpr uint8_t kKindMask = 0x03;
constexpr uint8_t kDirectedBit = 0x04;
constexpr unsigned kCodecShift = 3;
constexpr uint8_t kCodecMask = 0x18;
constexpr uint8_t kCreatesBit = 0x20;
constexpr uint8_t kReservedMask = 0xc0;

void encode_list(std::string& out, const Ids& ids, CodecMode codec, uint32_t segment_length) {
  coding::put_varint64(out, ids.size());
  if (codec == CodecMode::kEliasFano && ids.size() >= kEfMinListLength) {
    codec::EfParams params;
    params.segment_length = segment_length;
    const auto stream = codec::ef_encode(ids, params);
    coding::put_varint64(out, stream.bytes.size());
    out += stream.bytes;
    return;
  }
  for (VertexId id : ids) coding::put_fixed64(out, id);
}

Ids decode_list(coding::Reader& in, CodecMode codec) {
  const uint64_t count = in.varint64();
  if (codec == CodecMode::kEliasFano && count >= kEfMinListLength) {
    const uint64_t len = in.varint64();
    auto ids = codec::ef_decode(in.bytes(len));
    if (ids.size() != count) throw_corruption("payload list count mismatch");
    return ids;
  }
  if (count > in.remaining() / 8) throw_corruption("payload list truncated");
  Ids ids(count);
  for (auto& id : ids) id = in.fixed64();
  return ids;
}

}  // namespace

AdjacencyPayload AdjacencyPayload::pivot(DirectionMode dir, std::vector<VertexId> out,
                                         std::vector<VertexId> in) {
  AdjacencyPayload p;
  p.kind = EntryKind::kPivot;
  p.direction = dir;
  p.out.adds = std::move(out);
  p.in.adds = std::move(in);
  return p;
}

AdjacencyPayload AdjacencyPayload::tombstone(DirectionMode dir) {
  AdjacencyPayload p;
  p.kind = EntryKind::kVertexTombstone;
  p.direction = dir;
  return p;
}

AdjacencyPayload AdjacencyPayload::delta_add(DirectionMode dir, bool out_list, VertexId id) {
  AdjacencyPayload p;
  p.kind = EntryKind::kDelta;
  p.direction = dir;
  p.creates_vertex = true;
  (out_list ? p.out : p.in).adds.push_back(id);
  return p;
}

AdjacencyPayload AdjacencyPayload::delta_remove(DirectionMode dir, bool out_list, VertexId id) {
  AdjacencyPayload p;
  p.kind = EntryKind::kDelta;
  p.direction = dir;
  (out_list ? p.out : p.in).removes.push_back(id);
  return p;
}

void AdjacencyPayload::validate() const {
  for (const LabeledList* list : {&out, &in}) {
    if (!strictly_ascending(list->adds) || !strictly_ascending(list->removes)) {
      throw_corruption("adjacency list not strictly ascending");
    }
    if (!disjoint(list->adds, list->removes)) throw_corruption("ID both added and removed");
    if (kind != EntryKind::kDelta && !list->removes.empty()) {
      throw_corruption("removal label outside a delta");
    }
  }
  if (kind == EntryKind::kVertexTombstone && (!out.empty() || !in.empty())) {
    throw_corruption("tombstone with a payload");
  }
  if (direction == DirectionMode::kUndirected && !in.empty()) {
    throw_corruption("in-list in undirected mode");
  }
  if (creates_vertex && kind != EntryKind::kDelta) throw_corruption("creates flag outside a delta");
}

AdjacencyPayload merge_values(const AdjacencyPayload& older, const AdjacencyPayload& newer) {
  if (older.direction != newer.direction) throw_corruption("merging payloads of different direction modes");
  if (newer.kind != EntryKind::kDelta) return newer;

  AdjacencyPayload out;
  out.direction = newer.direction;
  switch (older.kind) {
    case EntryKind::kVertexTombstone:
      if (!newer.creates_vertex) return older;
      out.kind = EntryKind::kPivot;
      out.out.adds = newer.out.adds;
      out.in.adds = newer.in.adds;
      return out;
    case EntryKind::kPivot:
      out.kind = EntryKind::kPivot;
      out.out = merge_labeled(older.out, newer.out, false);
      out.in = merge_labeled(older.in, newer.in, false);
      return out;
    case EntryKind::kDelta:
      out.kind = EntryKind::kDelta;
      out.creates_vertex = older.creates_vertex || newer.creates_vertex;
      out.out = merge_labeled(older.out, newer.out, true);
      out.in = merge_labeled(older.in, newer.in, true);
      return out;
  }
  throw_corruption("unknown entry kind");
}

std::optional<AdjacencyPayload> fold_chain(std::span<const AdjacencyPayload> chain) {
  if (chain.empty()) return std::nullopt;
  AdjacencyPayload acc = chain.front();
  for (const auto& next : chain.subspan(1)) acc = merge_values(acc, next);
  return acc;
}

std::optional<AdjacencyPayload> resolve_at_bottom(const AdjacencyPayload& payload) {
  switch (payload.kind) {
    case EntryKind::kPivot:
      return payload;
    case EntryKind::kVertexTombstone:
      return std::nullopt;
    case EntryKind::kDelta:
      if (!payload.creates_vertex) return std::nullopt;
      return AdjacencyPayload::pivot(payload.direction, payload.out.adds, payload.in.adds);
  }
  return std::nullopt;
}

std::optional<Adjacency> resolve(const std::optional<AdjacencyPayload>& payload) {
  if (!payload) return std::nullopt;
  if (payload->kind == EntryKind::kVertexTombstone) return std::nullopt;
  if (payload->kind == EntryKind::kDelta && !payload->creates_vertex) return std::nullopt;
  return Adjacency{payload->out.adds, payload->in.adds};
}

std::string encode_payload(const AdjacencyPayload& payload, CodecMode codec,
                           uint32_t ef_segment_length) {
  uint8_t header = static_cast<uint8_t>(payload.kind) & kKindMask;
  if (payload.direction == DirectionMode::kDirected) header |= kDirectedBit;
  header |= static_cast<uint8_t>(static_cast<uint8_t>(codec) << kCodecShift) & kCodecMask;
  if (payload.creates_vertex) header |= kCreatesBit;

  std::string out;
  out.push_back(static_cast<char>(header));
  const Ids* lists[] = {&payload.out.adds, &payload.out.removes, &payload.in.adds,
                        &payload.in.removes};
  size_t present = 4;
  while (present > 0 && lists[present - 1]->empty()) --present;
  for (size_t i = 0; i < present; ++i) encode_list(out, *lists[i], codec, ef_segment_length);
  return out;
}

AdjacencyPayload decode_payload(std::string_view bytes) {
  coding::Reader in(bytes);
  const uint8_t header = in.fixed8();
  if (header & kReservedMask) throw_corruption("payload header reserved bits set");
  const uint8_t kind = header & kKindMask;
  if (kind > static_cast<uint8_t>(EntryKind::kVertexTombstone)) throw_corruption("payload kind");
  const uint8_t codec = (header & kCodecMask) >> kCodecShift;
  if (codec > static_cast<uint8_t>(CodecMode::kEliasFano)) throw_corruption("payload codec");

  AdjacencyPayload p;
  p.kind = static_cast<EntryKind>(kind);
  p.direction = (header & kDirectedBit) ? DirectionMode::kDirected : DirectionMode::kUndirected;
  p.creates_vertex = (header & kCreatesBit) != 0;
  Ids* lists[] = {&p.out.adds, &p.out.removes, &p.in.adds, &p.in.removes};
  for (Ids* list : lists) {
    if (in.empty()) break;
    *list = decode_list(in, static_cast<CodecMode>(codec));
  }
  if (!in.empty()) throw_corruption("trailing bytes after payload");
  p.validate();
  return p;
}

}  // namespace plsm::graph
