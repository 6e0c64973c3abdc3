#include "plsm/codec/elias_fano.hpp"

#include <algorithm>
#include <limits>

#include "plsm/codec/bit_stream.hpp"
#include "plsm/error.hpp"

namespace plsm::codec {

namespace {

using u128 = unsigned __int128;

// Smallest l with count * 2^l >= max_value + 1.
unsigned lower_bits_for_max(uint64_t count, uint64_t max_value) {
  if (count == 0) return 0;
  const u128 universe = static_cast<u128>(max_value) + 1;
  unsigned l = 0;
  while (static_cast<u128>(count) << l < universe) ++l;
  return l;
}

uint64_t upper_length(uint64_t count, uint64_t max_value, unsigned l) {
  return count + (l >= 64 ? 0 : (max_value >> l));
}

void write_varint(BitWriter& out, uint64_t v) {
  while (v >= 0x80) {
    out.write((v & 0x7f) | 0x80, 8);
    v >>= 7;
  }
  out.write(v, 8);
}

uint64_t read_varint(BitReader& in) {
  uint64_t result = 0;
  for (int shift = 0; shift <= 63; shift += 7) {
    const uint64_t byte = in.read(8);
    if (shift == 63 && byte > 1) throw_corruption("ef header varint overflow");
    result |= (byte & 0x7f) << shift;
    if ((byte & 0x80) == 0) return result;
  }
  throw_corruption("ef header varint too long");
}

// One plain Elias-Fano sequence: values non-decreasing, each <= max_value.
// Lower halves first, then the unary-coded upper halves.
uint64_t write_sequence(BitWriter* out, std::span<const uint64_t> values, uint64_t max_value) {
  const uint64_t count = values.size();
  if (count == 0) return 0;
  const unsigned l = lower_bits_for_max(count, max_value);
  const uint64_t upper = upper_length(count, max_value, l);
  if (out != nullptr) {
    const size_t start = out->size_bits();
    for (uint64_t v : values) out->write(v, l);
    uint64_t prev_high = 0;
    for (uint64_t v : values) {
      const uint64_t high = l >= 64 ? 0 : v >> l;
      out->skip(high - prev_high);
      out->write_bit(true);
      prev_high = high;
    }
    const size_t written_upper = out->size_bits() - start - count * l;
    out->skip(upper - written_upper);
  }
  return count * l + upper;
}

std::vector<uint64_t> read_sequence(BitReader& in, uint64_t count, uint64_t max_value) {
  std::vector<uint64_t> values;
  if (count == 0) return values;
  const unsigned l = lower_bits_for_max(count, max_value);
  if (l > 64) throw_corruption("ef lower width out of range");
  const u128 lower_total = static_cast<u128>(count) * l;
  const uint64_t upper = upper_length(count, max_value, l);
  if (lower_total > in.remaining() || upper > in.remaining() - static_cast<uint64_t>(lower_total)) {
    throw_corruption("ef sequence exceeds stream");
  }
  values.resize(count);
  for (auto& v : values) v = in.read(l);
  const size_t upper_start = in.position();
  uint64_t high = 0;
  for (uint64_t i = 0; i < count; ++i) {
    high += in.read_unary();
    if (in.position() - upper_start > upper) throw_corruption("ef upper bits overrun");
    const u128 value = (static_cast<u128>(high) << l) | values[i];
    if (value > max_value) throw_corruption("ef value out of range");
    values[i] = static_cast<uint64_t>(value);
  }
  in.seek(upper_start + upper);
  return values;
}

void check_input(std::span<const uint64_t> ids, const EfParams& params) {
  if (params.segment_length < 2) throw_invalid("ef segment length must be >= 2");
  for (size_t i = 1; i < ids.size(); ++i) {
    if (ids[i] <= ids[i - 1]) throw_invalid("ef input must be strictly ascending");
  }
  if (params.universe && !ids.empty() && ids.back() > *params.universe) {
    throw_invalid("ef input exceeds universe hint");
  }
}

EfLayout encode_impl(std::span<const uint64_t> ids, const EfParams& params, BitWriter* out) {
  check_input(ids, params);
  EfLayout layout;
  BitWriter header;
  const uint64_t n = ids.size();
  write_varint(header, n);
  if (n == 0) {
    layout.header_bits = header.size_bits();
    if (out != nullptr) *out = std::move(header);
    return layout;
  }
  const uint64_t s = params.segment_length;
  const uint64_t base = ids.front();
  const uint64_t span = ids.back() - base;
  write_varint(header, s);
  write_varint(header, base);
  write_varint(header, span);
  layout.header_bits = header.size_bits();
  if (out != nullptr) *out = std::move(header);

  const uint64_t t = (n + s - 1) / s;
  std::vector<uint64_t> bounds;
  bounds.reserve(t + 1);
  for (uint64_t j = 0; j < t; ++j) bounds.push_back(ids[j * s] - base);
  bounds.push_back(span);
  layout.first_level_count = bounds.size();
  layout.first_level_universe = span;  // values lie in [0, span]
  layout.first_level_bits = write_sequence(out, bounds, span);

  std::vector<uint64_t> local;
  for (uint64_t j = 0; j < t; ++j) {
    const uint64_t begin = j * s;
    const uint64_t end = std::min(n, begin + s);
    const uint64_t start = bounds[j];
    // Elements after the first are stored as (id - start - 1); the bound is
    // the largest value the segment could hold given the next boundary.
    const uint64_t max_e = (j + 1 < t) ? bounds[j + 1] - start - 2 : span - start - 1;
    local.clear();
    for (uint64_t i = begin + 1; i < end; ++i) local.push_back(ids[i] - base - start - 1);
    EfSegmentLayout seg;
    seg.count = local.size();
    seg.sub_universe = local.empty() ? 0 : max_e + 1;
    seg.lower_bits = lower_bits_for_max(seg.count, max_e);
    seg.payload_bits = write_sequence(out, local, max_e);
    layout.segments.push_back(seg);
  }
  return layout;
}

}  // namespace

unsigned ef_lower_bits(uint64_t count, uint64_t universe) {
  if (count == 0 || universe == 0) return 0;
  return lower_bits_for_max(count, universe - 1);
}

EfBitstream ef_encode(std::span<const uint64_t> ids, const EfParams& params) {
  BitWriter out;
  encode_impl(ids, params, &out);
  EfBitstream stream;
  stream.bit_length = out.size_bits();
  out.append_to(stream.bytes);
  return stream;
}

EfLayout ef_layout(std::span<const uint64_t> ids, const EfParams& params) {
  return encode_impl(ids, params, nullptr);
}

uint64_t ef_encoded_size_bits(std::span<const uint64_t> ids, const EfParams& params) {
  return ef_layout(ids, params).total_bits();
}

std::vector<uint64_t> ef_decode(std::string_view bytes) {
  BitReader in(bytes, 0, bytes.size() * 8);
  const uint64_t n = read_varint(in);
  std::vector<uint64_t> ids;
  if (n == 0) return ids;
  // Every element costs at least one upper bit, so n is bounded by the stream.
  if (n > bytes.size() * 8) throw_corruption("ef element count exceeds stream");
  const uint64_t s = read_varint(in);
  if (s < 2) throw_corruption("ef segment length < 2");
  const uint64_t base = read_varint(in);
  const uint64_t span = read_varint(in);
  if (span > std::numeric_limits<uint64_t>::max() - base) throw_corruption("ef span overflow");
  if (span < n - 1) throw_corruption("ef span smaller than element count");

  const uint64_t t = n / s + (n % s != 0);
  const auto bounds = read_sequence(in, t + 1, span);
  if (bounds.front() != 0 || bounds.back() != span) throw_corruption("ef first level endpoints");

  ids.reserve(n);
  for (uint64_t j = 0; j < t; ++j) {
    const uint64_t start = bounds[j];
    const uint64_t len = (j + 1 < t) ? s : n - s * (t - 1);
    const uint64_t k = len - 1;
    uint64_t max_e = 0;
    if (j + 1 < t) {
      if (bounds[j + 1] < start || bounds[j + 1] - start < len) throw_corruption("ef segment bounds");
      max_e = bounds[j + 1] - start - 2;
    } else {
      if (span - start < k) throw_corruption("ef last segment bounds");
      if (k == 0 && span != start) throw_corruption("ef last segment terminator");
      max_e = k == 0 ? 0 : span - start - 1;
    }
    ids.push_back(base + start);
    if (k == 0) continue;
    const auto local = read_sequence(in, k, max_e);
    uint64_t prev = 0;
    for (uint64_t i = 0; i < k; ++i) {
      if (i > 0 && local[i] <= prev) throw_corruption("ef segment not strictly ascending");
      prev = local[i];
      ids.push_back(base + start + 1 + local[i]);
    }
    if (j + 1 == t && ids.back() != base + span) throw_corruption("ef last element mismatch");
  }
  return ids;
}

}  // namespace plsm::codec
