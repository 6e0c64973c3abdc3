#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plsm/types.hpp"

namespace plsm::graph {

// One direction of an adjacency payload. Pivot payloads only use `adds`;
// delta payloads label each ID as an addition or a removal. Both vectors are
// strictly ascending and disjoint.
struct LabeledList {
  std::vector<VertexId> adds;
  std::vector<VertexId> removes;

  bool empty() const { return adds.empty() && removes.empty(); }
  bool operator==(const LabeledList&) const = default;
};

struct AdjacencyPayload {
  EntryKind kind = EntryKind::kPivot;
  DirectionMode direction = DirectionMode::kUndirected;
  // Set on deltas produced by edge additions: a vertex whose only entries are
  // such deltas exists. Removal-only deltas never create a vertex.
  bool creates_vertex = false;
  LabeledList out;
  LabeledList in;  // always empty in undirected mode

  static AdjacencyPayload pivot(DirectionMode dir, std::vector<VertexId> out,
                                std::vector<VertexId> in = {});
  static AdjacencyPayload tombstone(DirectionMode dir);
  static AdjacencyPayload delta_add(DirectionMode dir, bool out_list, VertexId id);
  static AdjacencyPayload delta_remove(DirectionMode dir, bool out_list, VertexId id);

  // Throws Corruption when a list is unsorted, duplicated, or labels overlap,
  // or when a non-delta carries removals.
  void validate() const;

  bool operator==(const AdjacencyPayload&) const = default;
};

// Resolved neighbor lists of an existing vertex.
struct Adjacency {
  std::vector<VertexId> out;
  std::vector<VertexId> in;

  bool operator==(const Adjacency&) const = default;
};

// Combines an older entry with a newer one for the same key.
//   newer Pivot/Tombstone    -> newer
//   Tombstone (+) Delta      -> Pivot of the delta's additions if it creates
//                               the vertex, else Tombstone
//   Pivot (+) Delta          -> Pivot
//   Delta (+) Delta          -> Delta (removals kept to mask older entries)
// Per ID the newer label wins.
AdjacencyPayload merge_values(const AdjacencyPayload& older, const AdjacencyPayload& newer);

// Left fold of merge_values over a chain ordered oldest to newest.
std::optional<AdjacencyPayload> fold_chain(std::span<const AdjacencyPayload> chain);

// Applied when an entry reaches the largest level with nothing beneath it:
// tombstones and removal-only deltas vanish, other deltas become pivots.
std::optional<AdjacencyPayload> resolve_at_bottom(const AdjacencyPayload& payload);

// The neighbor lists a reader sees, or nullopt when the vertex is absent.
std::optional<Adjacency> resolve(const std::optional<AdjacencyPayload>& payload);

// Payload wire format (see docs/FORMATS.md):
//   header byte: bits 0-1 kind, bit 2 directed, bits 3-4 codec, bit 5 creates-vertex
//   then out-add, out-remove, in-add, in-remove lists; trailing empty lists omitted.
//   list: varint count, then either count x fixed64 (raw) or, for codec EF and
//   count >= kEfMinListLength, varint byte length + Elias-Fano stream.
inline constexpr size_t kEfMinListLength = 8;

std::string encode_payload(const AdjacencyPayload& payload, CodecMode codec,
                           uint32_t ef_segment_length = 128);
AdjacencyPayload decode_payload(std::string_view bytes);

}  // namespace plsm::graph
