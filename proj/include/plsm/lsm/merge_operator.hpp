#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "plsm/types.hpp"

namespace plsm::lsm {

struct Value {
  EntryKind kind = EntryKind::kPivot;
  std::string bytes;

  bool operator==(const Value&) const = default;
};

// Application hook that gives Delta records their meaning. The engine only
// decides which records form a chain; the operator decides what they fold to.
class MergeOperator {
 public:
  virtual ~MergeOperator() = default;

  // Throws Corruption/InvalidArgument if `value` is not a valid delta.
  virtual void validate_delta(std::string_view value) const = 0;

  // `base` is the newest Pivot or VertexTombstone beneath the deltas, or
  // null if the chain has none within scope. Deltas are oldest first.
  virtual Value fold(const Value* base, std::span<const std::string_view> deltas) const = 0;

  // Called for a Delta or VertexTombstone that reaches the largest level with
  // nothing older beneath it. nullopt drops the record.
  virtual std::optional<Value> resolve_at_bottom(const Value& value) const = 0;
};

}  // namespace plsm::lsm
