#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "plsm/codec/elias_fano.hpp"
#include "plsm/error.hpp"

using namespace plsm::codec;

namespace {

std::vector<uint64_t> random_list(std::mt19937_64& rng, size_t max_len, uint64_t universe) {
  const size_t len = std::min<uint64_t>(std::uniform_int_distribution<size_t>(0, max_len)(rng), universe / 2);
  std::set<uint64_t> s;
  std::uniform_int_distribution<uint64_t> pick(0, universe - 1);
  while (s.size() < len) s.insert(pick(rng));
  return {s.begin(), s.end()};
}

double ceil_log2(double x) { return x <= 1 ? 0 : std::ceil(std::log2(x)); }

}  // namespace

TEST(EfCodec, EmptyAndSingleton) {
  const std::vector<uint64_t> empty;
  auto s = ef_encode(empty);
  EXPECT_TRUE(ef_decode(s.bytes).empty());
  EXPECT_EQ(s.bit_length, ef_encoded_size_bits(empty));
  const auto layout = ef_layout(empty);
  EXPECT_TRUE(layout.segments.empty());
  EXPECT_EQ(layout.total_bits(), layout.header_bits);

  const std::vector<uint64_t> one{0};
  EXPECT_EQ(ef_decode(ef_encode(one).bytes), one);
  const std::vector<uint64_t> big{~uint64_t{0}};
  EXPECT_EQ(ef_decode(ef_encode(big).bytes), big);
}

TEST(EfCodec, SmallPrimeList) {
  const std::vector<uint64_t> ids{2, 3, 5, 7, 11, 13, 24, 31};
  EfParams p;
  p.segment_length = 8;
  const auto s = ef_encode(ids, p);
  EXPECT_EQ(ef_decode(s.bytes), ids);
  const auto layout = ef_layout(ids, p);
  uint64_t payload = 0;
  for (const auto& seg : layout.segments) payload += seg.payload_bits;
  // 8 * (2 + ceil(log2(32 / 8))); header and boundary list are counted apart.
  EXPECT_LE(payload, 8u * (2 + 2));
  EXPECT_EQ(s.bit_length, layout.header_bits + layout.first_level_bits + payload);
  EXPECT_EQ(s.bit_length, layout.total_bits());
}

TEST(EfCodec, LowerBitsDefinition) {
  EXPECT_EQ(ef_lower_bits(0, 100), 0u);
  EXPECT_EQ(ef_lower_bits(8, 32), 2u);
  EXPECT_EQ(ef_lower_bits(8, 33), 3u);
  EXPECT_EQ(ef_lower_bits(10, 5), 0u);
  for (uint64_t n = 1; n < 50; ++n) {
    for (uint64_t u = 1; u < 3000; u += 7) {
      const unsigned l = ef_lower_bits(n, u);
      ASSERT_GE(n << l, u);
      if (l > 0) ASSERT_LT(n << (l - 1), u);
    }
  }
}

TEST(EfCodec, RoundtripFuzzAndExactSize) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const uint64_t universe = i % 3 == 0 ? (uint64_t{1} << 32) : i % 3 == 1 ? 5000 : 1 << 20;
    auto ids = random_list(rng, i % 10 == 0 ? 4096 : 300, universe);
    if (universe == 5000 && ids.size() > 4000) ids.resize(4000);
    EfParams p;
    p.segment_length = 2 + static_cast<uint32_t>(rng() % 200);
    const auto s = ef_encode(ids, p);
    ASSERT_EQ(ef_decode(s.bytes), ids);
    ASSERT_EQ(s.bit_length, ef_encoded_size_bits(ids, p));
    ASSERT_EQ(s.bytes.size(), (s.bit_length + 7) / 8);
  }
}

TEST(EfCodec, PerSegmentBitsBound) {
  std::mt19937_64 rng(77);
  size_t checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const uint64_t universe = uint64_t{1} << (8 + rng() % 25);
    const auto ids = random_list(rng, 2000, std::min<uint64_t>(universe, 1 << 30));
    const auto layout = ef_layout(ids);
    for (const auto& seg : layout.segments) {
      if (seg.count == 0) continue;
      const double elements = static_cast<double>(seg.count + 1);
      const double bound = 2 + ceil_log2(static_cast<double>(seg.sub_universe) / elements) + 1;
      ASSERT_LE(static_cast<double>(seg.payload_bits) / static_cast<double>(seg.count), bound);
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(EfCodec, FirstLevelOverhead) {
  // The boundary sequence is itself plain Elias-Fano over [0, span].
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto ids = random_list(rng, 4000, 1 << 24);
    if (ids.size() < 2) continue;
    const auto layout = ef_layout(ids);
    const double t = static_cast<double>(layout.first_level_count);
    const double per = static_cast<double>(layout.first_level_bits) / t;
    ASSERT_LE(per, 2 + ceil_log2(static_cast<double>(layout.first_level_universe + 1) / t) + 1);
  }
}

TEST(EfCodec, DenseRunCompresses) {
  std::vector<uint64_t> ids(1024);
  for (uint64_t i = 0; i < 1024; ++i) ids[i] = i;
  const auto bits = ef_encoded_size_bits(ids);
  EXPECT_LT(static_cast<double>(bits) / 1024, 4.0);
  EXPECT_EQ(ef_decode(ef_encode(ids).bytes), ids);
}

TEST(EfCodec, SparseListRatioMeasured) {
  std::mt19937_64 rng(9);
  std::set<uint64_t> s;
  while (s.size() < 32) s.insert(rng() & 0xffffffffu);
  const std::vector<uint64_t> ids(s.begin(), s.end());
  const double ratio = static_cast<double>(ef_encoded_size_bits(ids)) / (64.0 * 32);
  RecordProperty("sparse_ratio", std::to_string(ratio));
  EXPECT_EQ(ef_decode(ef_encode(ids).bytes), ids);
}

TEST(EfCodec, RejectsBadInput) {
  EXPECT_THROW(ef_encode(std::vector<uint64_t>{3, 3}), plsm::Error);
  EXPECT_THROW(ef_encode(std::vector<uint64_t>{5, 2}), plsm::Error);
  EfParams p;
  p.segment_length = 1;
  EXPECT_THROW(ef_encode(std::vector<uint64_t>{1}, p), plsm::Error);
  p.segment_length = 128;
  p.universe = 10;
  EXPECT_THROW(ef_encode(std::vector<uint64_t>{11}, p), plsm::Error);
}

TEST(EfCodec, CorruptionNeverCrashes) {
  std::mt19937_64 rng(31337);
  size_t errors = 0;
  for (int i = 0; i < 100000; ++i) {
    auto ids = random_list(rng, 64, 1 << 16);
    auto s = ef_encode(ids);
    if (s.bytes.empty()) continue;
    const uint64_t bit = rng() % (s.bytes.size() * 8);
    s.bytes[bit / 8] = static_cast<char>(s.bytes[bit / 8] ^ (1 << (bit % 8)));
    if (i % 7 == 0) s.bytes.resize(rng() % s.bytes.size());
    try {
      const auto out = ef_decode(s.bytes);
      for (size_t k = 1; k < out.size(); ++k) ASSERT_LT(out[k - 1], out[k]);
    } catch (const plsm::Error& e) {
      ASSERT_EQ(e.code(), plsm::ErrorCode::kCorruption);
      ++errors;
    }
  }
  EXPECT_GT(errors, 0u);
}
