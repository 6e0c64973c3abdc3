#include "plsm/graph/merge_operator.hpp"

#include "plsm/error.hpp"

namespace plsm::graph {

void AdjacencyMergeOperator::validate_delta(std::string_view value) const {
  if (decode_payload(value).kind != EntryKind::kDelta) throw_invalid("merge value is not a delta");
}

lsm::Value AdjacencyMergeOperator::fold(const lsm::Value* base,
                                        std::span<const std::string_view> deltas) const {
  std::optional<AdjacencyPayload> acc;
  if (base) {
    if (base->kind == EntryKind::kVertexTombstone && base->bytes.empty()) {
      // Tombstones may be written without a payload; direction comes from the deltas.
      acc = AdjacencyPayload::tombstone(DirectionMode::kUndirected);
    } else {
      acc = decode_payload(base->bytes);
    }
  }
  for (std::string_view d : deltas) {
    AdjacencyPayload next = decode_payload(d);
    if (next.kind != EntryKind::kDelta) throw_corruption("non-delta record inside a delta chain");
    if (!acc) {
      acc = std::move(next);
      continue;
    }
    if (acc->kind == EntryKind::kVertexTombstone) acc->direction = next.direction;
    acc = merge_values(*acc, next);
  }
  if (!acc) throw_invalid("fold of an empty chain");
  if (acc->kind == EntryKind::kVertexTombstone) return {EntryKind::kVertexTombstone, {}};
  return {acc->kind, encode_payload(*acc, codec_, segment_)};
}

std::optional<lsm::Value> AdjacencyMergeOperator::resolve_at_bottom(const lsm::Value& value) const {
  if (value.kind != EntryKind::kDelta) return std::nullopt;
  auto resolved = graph::resolve_at_bottom(decode_payload(value.bytes));
  if (!resolved) return std::nullopt;
  return lsm::Value{resolved->kind, encode_payload(*resolved, codec_, segment_)};
}

}  // namespace plsm::graph
