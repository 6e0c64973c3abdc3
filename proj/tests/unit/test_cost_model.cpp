#include <gtest/gtest.h>

#include <cmath>

#include "plsm/error.hpp"
#include "plsm/policy/cost_model.hpp"
#include "plsm/policy/workload_tracker.hpp"

using namespace plsm;
using namespace plsm::policy;

namespace {

CostParams running_example(LevelingMode mode = LevelingMode::kLeveling) {
  CostParams p;
  p.id_bytes = 8;
  p.block_bytes = 4096;
  p.size_ratio = 10;
  p.levels = 4;
  p.avg_degree = 32;
  p.theta_lookup = 0.5;
  p.theta_update = 0.5;
  p.mode = mode;
  return p;
}

// Oracle: the cost expressions written out by hand, no shared helpers.
double oracle_wa(const CostParams& p) {
  return p.mode == LevelingMode::kLeveling ? p.size_ratio * p.levels
                                           : p.size_ratio * p.levels - p.size_ratio + 1;
}
double oracle_delta(const CostParams& p) {
  return 2 * p.id_bytes * oracle_wa(p) / p.block_bytes +
         p.theta_lookup * p.avg_degree / (p.theta_update * (p.size_ratio - 1));
}
double oracle_pivot(const CostParams& p, double d) {
  return 2 + (d + 1) * p.id_bytes / p.block_bytes + (d + 2) * p.id_bytes * oracle_wa(p) / p.block_bytes;
}
// Linear scan for the first d where delta is no worse than pivot.
uint64_t oracle_threshold(const CostParams& p) {
  const double delta = oracle_delta(p);
  for (uint64_t d = 0; d < kMaxThreshold; ++d) {
    if (delta <= oracle_pivot(p, static_cast<double>(d)) + 1e-9) return d;
  }
  return kMaxThreshold;
}

}  // namespace

TEST(CostModel, RunningExampleLeveling) {
  const auto p = running_example();
  EXPECT_NEAR(delta_cost(p), 3.71181, 5e-6);
  EXPECT_NEAR(pivot_cost(p, 20), 3.75977, 5e-6);
  EXPECT_NEAR(pivot_cost(p, 19), 3.67969, 5e-6);
  EXPECT_LT(pivot_cost(p, 19), delta_cost(p));
  EXPECT_EQ(threshold(p), 20u);
  EXPECT_EQ(threshold_scan(p), 20u);
  EXPECT_EQ(choose_update(19, p, false), UpdateKind::kPivot);
  EXPECT_EQ(choose_update(20, p, false), UpdateKind::kDelta);
}

TEST(CostModel, RunningExampleOneLeveling) {
  const auto p = running_example(LevelingMode::kOneLeveling);
  EXPECT_DOUBLE_EQ(write_amplification(p), 31);
  EXPECT_NEAR(delta_cost(p), 2.0 * 8 * 31 / 4096 + 32.0 / 9, 1e-12);
  EXPECT_NEAR(delta_cost(p), 3.67665, 5e-6);
  EXPECT_EQ(threshold(p), 25u);
  EXPECT_EQ(threshold_scan(p), 25u);
}

TEST(CostModel, DegenerateWorkloads) {
  auto p = running_example();
  p.theta_lookup = 0;
  p.theta_update = 1;
  EXPECT_NEAR(delta_cost(p), 2.0 * 8 * 40 / 4096, 1e-12);
  EXPECT_EQ(threshold(p), 0u);
  EXPECT_NEAR(pivot_cost(p, 0), 2 + 8.0 / 4096 + 2 * 8.0 * 40 / 4096, 1e-12);

  p.theta_lookup = 1;
  p.theta_update = 0;
  EXPECT_THROW(delta_cost(p), Error);
  EXPECT_EQ(threshold(p), kMaxThreshold);
  EXPECT_EQ(choose_update(1e9, p, false), UpdateKind::kPivot);
  EXPECT_EQ(choose_update(0, p, true), UpdateKind::kDelta);
}

TEST(CostModel, InvalidParamsRejected) {
  auto p = running_example();
  p.theta_lookup = 0.6;
  EXPECT_THROW(p.validate(), Error);
  p = running_example();
  p.size_ratio = 1;
  EXPECT_THROW(delta_cost(p), Error);
  p = running_example();
  p.levels = 0;
  EXPECT_THROW(pivot_cost(p, 1), Error);
  EXPECT_THROW(pivot_cost(running_example(), -1), Error);
}

TEST(CostModel, GridClosedFormMatchesScanAndOracle) {
  size_t points = 0;
  for (auto mode : {LevelingMode::kLeveling, LevelingMode::kOneLeveling}) {
    for (double t : {2.0, 4.0, 10.0}) {
      for (double l = 1; l <= 6; ++l) {
        for (double d = 1; d <= 256; d *= 2) {
          for (int k = 0; k <= 10; ++k) {
            CostParams p = running_example(mode);
            p.size_ratio = t;
            p.levels = l;
            p.avg_degree = d;
            p.theta_lookup = k == 10 ? 1 - 1e-6 : k / 10.0;
            p.theta_update = 1 - p.theta_lookup;
            const uint64_t closed = threshold(p);
            ASSERT_EQ(closed, threshold_scan(p));
            ASSERT_EQ(closed, oracle_threshold(p));
            for (uint64_t dd : {closed, closed + 1, closed > 0 ? closed - 1 : 0}) {
              const bool delta = choose_update(static_cast<double>(dd), p, false) == UpdateKind::kDelta;
              ASSERT_EQ(delta, oracle_delta(p) <= oracle_pivot(p, static_cast<double>(dd)) + 1e-9);
            }
            ++points;
          }
        }
      }
    }
  }
  EXPECT_GE(points, 2000u);
}

TEST(CostModel, Monotonicity) {
  for (auto mode : {LevelingMode::kLeveling, LevelingMode::kOneLeveling}) {
    auto p = running_example(mode);
    for (double d = 0; d < 1000; ++d) ASSERT_LT(pivot_cost(p, d), pivot_cost(p, d + 1));

    uint64_t prev = 0;
    for (int k = 0; k < 10; ++k) {
      p.theta_lookup = k / 10.0;
      p.theta_update = 1 - p.theta_lookup;
      const uint64_t t = threshold(p);
      ASSERT_GE(t, prev);
      prev = t;
    }

    p = running_example(mode);
    prev = kMaxThreshold;
    for (double l = 1; l <= 8; ++l) {
      p.levels = l;
      const uint64_t t = threshold(p);
      ASSERT_LE(t, prev);
      prev = t;
    }
  }
}

TEST(CostModel, OneLevelingThresholdNotBelowLeveling) {
  for (double t : {2.0, 4.0, 10.0}) {
    for (double l = 1; l <= 6; ++l) {
      for (double d = 1; d <= 256; d += 5) {
        auto a = running_example(LevelingMode::kLeveling);
        a.size_ratio = t;
        a.levels = l;
        a.avg_degree = d;
        auto b = a;
        b.mode = LevelingMode::kOneLeveling;
        ASSERT_GE(threshold(b), threshold(a));
      }
    }
  }
}

TEST(CostModel, LevelHitProbabilities) {
  EXPECT_NEAR(level_hit_probability(1, 10, 37.11), 0.964, 1e-3);
  EXPECT_NEAR(level_hit_probability(2, 10, 37.11), 0.284, 1e-3);
  EXPECT_NEAR(level_hit_probability(3, 10, 37.11), 0.033, 1e-3);
  EXPECT_NEAR(expected_retrieval_cost(4, 10, 37.11), 0.964 + 0.284 + 0.033, 2e-3);
  EXPECT_DOUBLE_EQ(expected_retrieval_cost(1, 10, 37.11), 0);
  EXPECT_NEAR(expected_retrieval_cost(5, 10, 1e9), 4, 1e-9);
  for (int i = 1; i < 6; ++i) {
    const double pi = level_hit_probability(i, 10, 32);
    EXPECT_GT(pi, 0);
    EXPECT_LT(pi, 1);
    EXPECT_LT(level_hit_probability(i + 1, 10, 32), pi);
  }
  EXPECT_THROW(level_hit_probability(0, 10, 32), Error);
}

TEST(WorkloadTracker, PriorThenWindowRatio) {
  WorkloadTracker tracker(1024, 64, 0.5);
  EXPECT_DOUBLE_EQ(tracker.theta_lookup(), 0.5);
  for (int i = 0; i < 50; ++i) {
    tracker.observe(OpKind::kLookup);
    tracker.observe(OpKind::kUpdate);
  }
  EXPECT_DOUBLE_EQ(tracker.theta_lookup(), 0.5);
  EXPECT_DOUBLE_EQ(tracker.theta_lookup() + tracker.theta_update(), 1.0);
  tracker.reset();
  EXPECT_EQ(tracker.window_count(), 0u);
  for (int i = 0; i < 2000; ++i) tracker.observe(OpKind::kUpdate);
  EXPECT_EQ(tracker.window_count(), 1024u);
  EXPECT_DOUBLE_EQ(tracker.theta_lookup(), 0);
}

TEST(WorkloadTracker, NinetyTenMix) {
  WorkloadTracker tracker;
  uint64_t x = 12345;
  for (int i = 0; i < 10000; ++i) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    tracker.observe((x >> 33) % 10 < 9 ? OpKind::kLookup : OpKind::kUpdate);
  }
  EXPECT_NEAR(tracker.theta_lookup(), 0.9, 0.05);
  EXPECT_LE(tracker.window_lookups(), tracker.window_size());
}

TEST(WorkloadStats, AverageDegreeIsEdgesPerVertex) {
  WorkloadStats s;
  EXPECT_DOUBLE_EQ(s.avg_degree(), 0);
  s.vertices = 4;
  s.edges = 10;
  s.half_edges = 20;
  EXPECT_DOUBLE_EQ(s.avg_degree(), 2.5);
}
