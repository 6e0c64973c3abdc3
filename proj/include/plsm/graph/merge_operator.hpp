#pragma once

#include "plsm/graph/entries.hpp"
#include "plsm/lsm/merge_operator.hpp"

namespace plsm::graph {

// Folds adjacency payload chains; re-encodes results with the store's codec.
class AdjacencyMergeOperator final : public lsm::MergeOperator {
 public:
  explicit AdjacencyMergeOperator(CodecMode codec, uint32_t ef_segment_length = 128)
      : codec_(codec), segment_(ef_segment_length) {}

  void validate_delta(std::string_view value) const override;
  lsm::Value fold(const lsm::Value* base, std::span<const std::string_view> deltas) const override;
  std::optional<lsm::Value> resolve_at_bottom(const lsm::Value& value) const override;

  // Only safe before the owning engine starts folding.
  void set_codec(CodecMode codec, uint32_t ef_segment_length) {
    codec_ = codec;
    segment_ = ef_segment_length;
  }

 private:
  CodecMode codec_;
  uint32_t segment_;
};

}  // namespace plsm::graph
