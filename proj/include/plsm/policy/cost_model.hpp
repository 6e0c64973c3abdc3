#pragma once

#include <cstdint>

#include "plsm/types.hpp"

// Expected block-I/O cost of routing one edge half-update as a delta
// (merge) or a pivot (read, fold, rewrite), and the degree threshold that
// separates the two.
namespace plsm::policy {

struct CostParams {
  double id_bytes = 8;          // I
  double block_bytes = 4096;    // B
  double size_ratio = 10;       // T
  double levels = 4;            // L
  double avg_degree = 0;        // d-bar
  double theta_lookup = 0.5;    // fraction of lookups
  double theta_update = 0.5;    // fraction of updates
  LevelingMode mode = LevelingMode::kLeveling;

  // Throws InvalidArgument when an invariant is broken.
  void validate() const;
};

// Used when theta_update == 0: every non-saturated update is a pivot.
inline constexpr uint64_t kMaxThreshold = uint64_t{1} << 20;

// Write amplification factor applied to each written byte: T*L for leveling,
// T*(L-1)+1 for one-leveling.
double write_amplification(const CostParams& p);

// Write term plus the prospective read term theta_L*d/(theta_U*(T-1)).
// Throws InvalidArgument when theta_update == 0.
double delta_cost(const CostParams& p);

// 2 + (d+1)I/B + (d+2)I*WA/B
double pivot_cost(const CostParams& p, double degree);

// Closed form: the smallest integer degree at which a delta update costs no
// more than a pivot update, clamped at 0.
uint64_t threshold(const CostParams& p);

// Same quantity found by searching the cost inequality directly. Kept
// separate from the closed form so each can check the other.
uint64_t threshold_scan(const CostParams& p);

UpdateKind choose_update(double estimated_degree, const CostParams& p, bool saturated);

// Probability that a lookup meets a delta entry at level L-i:
// 1 - exp(-(T-1)*d / T^(1+i)).
double level_hit_probability(int level_offset, double size_ratio, double avg_degree);

// Sum of level_hit_probability for i = 1 .. L-1.
double expected_retrieval_cost(int levels, double size_ratio, double avg_degree);

}  // namespace plsm::policy
