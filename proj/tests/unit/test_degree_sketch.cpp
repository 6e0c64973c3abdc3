#include <gtest/gtest.h>

#include <cmath>

#include "plsm/error.hpp"
#include "plsm/sketch/degree_sketch.hpp"

using plsm::sketch::DegreeSketch;

namespace {

uint8_t cell(unsigned e, unsigned m) { return static_cast<uint8_t>(e << 4 | m); }

}  // namespace

TEST(DegreeSketch, DecodeFixedPoints) {
  EXPECT_EQ(DegreeSketch::decode(cell(2, 7)), 76u);
  EXPECT_EQ(DegreeSketch::decode(cell(5, 2)), 560u);
  EXPECT_EQ(DegreeSketch::decode(cell(15, 15)), 1015792u);
  EXPECT_EQ(DegreeSketch::decode(0), 0u);
  // Oracle: closed form evaluated with pow.
  for (unsigned c = 0; c < 256; ++c) {
    const double e = c >> 4;
    const double m = c & 15;
    ASSERT_EQ(static_cast<double>(DegreeSketch::decode(static_cast<uint8_t>(c))),
              (std::pow(2.0, e) - 1) * 16 + std::pow(2.0, e) * m);
  }
}

TEST(DegreeSketch, ExactBelowSixteen) {
  DegreeSketch s(7);
  for (uint64_t i = 1; i <= 16; ++i) {
    s.increment(3);
    ASSERT_EQ(s.estimate(3), i);
  }
  EXPECT_EQ(s.cell(3), cell(1, 0));
  EXPECT_EQ(s.estimate(4), 0u);
  EXPECT_FALSE(s.is_saturated(4));
}

TEST(DegreeSketch, CarryIntoExponent) {
  DegreeSketch s(1);
  s.set_cell(9, cell(2, 15));
  const auto before = s.estimate(9);
  while (s.cell(9) == cell(2, 15)) s.increment(9);
  EXPECT_EQ(s.cell(9), cell(3, 0));
  EXPECT_EQ(s.estimate(9), before + 4);
}

TEST(DegreeSketch, SaturationIsTerminal) {
  DegreeSketch s(3);
  s.set_cell(1, DegreeSketch::kSaturated);
  EXPECT_TRUE(s.is_saturated(1));
  for (int i = 0; i < 100000; ++i) s.increment(1);
  EXPECT_EQ(s.cell(1), DegreeSketch::kSaturated);

  for (int trial = 0; trial < 100; ++trial) {
    DegreeSketch t(1000 + trial);
    // Drive from the last exponent so 10^7-scale counts stay fast.
    t.set_cell(0, cell(14, 0));
    const uint64_t remaining = DegreeSketch::decode(DegreeSketch::kSaturated) -
                               DegreeSketch::decode(cell(14, 0));
    for (uint64_t i = 0; i < 20 * remaining && !t.is_saturated(0); ++i) t.increment(0);
    ASSERT_TRUE(t.is_saturated(0));
  }
}

TEST(DegreeSketch, TenMillionIncrementsSaturate) {
  DegreeSketch s(99);
  for (uint64_t i = 0; i < 10'000'000; ++i) s.increment(5);
  EXPECT_TRUE(s.is_saturated(5));
}

TEST(DegreeSketch, EstimatesNeverDecrease) {
  DegreeSketch s(11);
  uint64_t prev = 0;
  for (int i = 0; i < 50000; ++i) {
    s.increment(2);
    ASSERT_GE(s.estimate(2), prev);
    prev = s.estimate(2);
  }
}

TEST(DegreeSketch, DeterministicForSeed) {
  DegreeSketch a(42), b(42), c(43);
  for (int i = 0; i < 20000; ++i) {
    a.increment(i % 17);
    b.increment(i % 17);
    c.increment(i % 17);
  }
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
}

TEST(DegreeSketch, MonteCarloUnbiased) {
  constexpr int kRuns = 2000;
  for (uint64_t d : {50u, 500u}) {
    double sum = 0;
    for (int r = 0; r < kRuns; ++r) {
      DegreeSketch s(0xabc0000ULL + r * 7919ULL + d);
      for (uint64_t i = 0; i < d; ++i) s.increment(0);
      sum += static_cast<double>(s.estimate(0));
    }
    EXPECT_NEAR(sum / kRuns, static_cast<double>(d), 0.05 * d);
  }
}

TEST(DegreeSketch, SerializeRoundtrip) {
  DegreeSketch s(5);
  for (int i = 0; i < 3000; ++i) s.increment(i % 100);
  const auto bytes = s.serialize();
  auto back = DegreeSketch::deserialize(bytes);
  EXPECT_EQ(back, s);
  EXPECT_EQ(back.memory_bytes(), s.capacity());
  // The generator state travels too: both continue identically.
  for (int i = 0; i < 3000; ++i) {
    s.increment(50);
    back.increment(50);
  }
  EXPECT_EQ(back, s);

  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(DegreeSketch::deserialize(bad), plsm::Error);
  EXPECT_THROW(DegreeSketch::deserialize(bytes.substr(0, bytes.size() - 1)), plsm::Error);
}

TEST(DegreeSketch, GrowthAndRange) {
  DegreeSketch s;
  s.increment(1000);
  EXPECT_GE(s.capacity(), 1001u);
  EXPECT_EQ(s.cell(999), 0);
  EXPECT_THROW(s.increment(DegreeSketch::kMaxVertex + 1), plsm::Error);
}
