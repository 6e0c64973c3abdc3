#pragma once

#include <cstdint>

namespace plsm {

using VertexId = uint64_t;
using SequenceNumber = uint64_t;

// Tag carried by every engine record. The numeric values are part of the
// on-disk format.
enum class EntryKind : uint8_t {
  kPivot = 0,
  kDelta = 1,
  kVertexTombstone = 2,
};

enum class LevelingMode : uint8_t {
  kLeveling = 0,
  kOneLeveling = 1,
};

enum class DirectionMode : uint8_t {
  kUndirected = 0,
  kDirected = 1,
};

enum class CodecMode : uint8_t {
  kRaw = 0,
  kEliasFano = 1,
};

enum class UpdateKind : uint8_t {
  kDelta,
  kPivot,
};

inline const char* to_string(EntryKind k) {
  switch (k) {
    case EntryKind::kPivot: return "pivot";
    case EntryKind::kDelta: return "delta";
    case EntryKind::kVertexTombstone: return "tombstone";
  }
  return "?";
}

inline const char* to_string(LevelingMode m) {
  return m == LevelingMode::kLeveling ? "leveling" : "one-leveling";
}

inline const char* to_string(UpdateKind k) { return k == UpdateKind::kDelta ? "delta" : "pivot"; }

}  // namespace plsm
