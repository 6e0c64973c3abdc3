#include "plsm/policy/cost_model.hpp"

#include <cmath>

#include "plsm/error.hpp"

namespace plsm::policy {

void CostParams::validate() const {
  if (!(id_bytes > 0)) throw_invalid("cost params: I must be positive");
  if (!(block_bytes > 0)) throw_invalid("cost params: B must be positive");
  if (!(size_ratio >= 2)) throw_invalid("cost params: T must be >= 2");
  if (!(levels >= 1)) throw_invalid("cost params: L must be >= 1");
  if (!(avg_degree >= 0)) throw_invalid("cost params: average degree must be >= 0");
  if (!(theta_lookup >= 0 && theta_lookup <= 1 && theta_update >= 0 && theta_update <= 1)) {
    throw_invalid("cost params: workload fractions must lie in [0,1]");
  }
  if (std::abs(theta_lookup + theta_update - 1.0) > 1e-9) {
    throw_invalid("cost params: workload fractions must sum to 1");
  }
}

double write_amplification(const CostParams& p) {
  const double t = p.size_ratio;
  const double l = p.levels;
  return p.mode == LevelingMode::kLeveling ? t * l : t * (l - 1) + 1;
}

namespace {

double prospective_reads(const CostParams& p) {
  return p.theta_lookup * p.avg_degree / (p.theta_update * (p.size_ratio - 1));
}

}  // namespace

double delta_cost(const CostParams& p) {
  p.validate();
  if (p.theta_update == 0) throw_invalid("delta cost undefined for a lookup-only workload");
  return 2 * p.id_bytes * write_amplification(p) / p.block_bytes + prospective_reads(p);
}

double pivot_cost(const CostParams& p, double degree) {
  p.validate();
  if (degree < 0) throw_invalid("pivot cost: negative degree");
  const double lookup = 2 + (degree + 1) * p.id_bytes / p.block_bytes;
  const double rewrite = (degree + 2) * p.id_bytes * write_amplification(p) / p.block_bytes;
  return lookup + rewrite;
}

uint64_t threshold(const CostParams& p) {
  p.validate();
  if (p.theta_update == 0) return kMaxThreshold;
  const double b = p.block_bytes;
  const double i = p.id_bytes;
  const double t = p.size_ratio;
  const double l = p.levels;
  double x = 0;
  if (p.mode == LevelingMode::kLeveling) {
    const double tl1 = t * l + 1;
    x = p.theta_lookup * p.avg_degree * b / (p.theta_update * i * (t - 1) * tl1) - 2 * b / (i * tl1) -
        1 / tl1;
  } else {
    const double a = t * l - t + 2;
    x = b / (i * a) * (prospective_reads(p) - 2) - 1 / a;
  }
  if (!(x > 0)) return 0;
  // Values a rounding error above an integer are ties, and ties go to delta.
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, nearest)) x = nearest;
  const double d = std::ceil(x);
  return d >= static_cast<double>(kMaxThreshold) ? kMaxThreshold : static_cast<uint64_t>(d);
}

uint64_t threshold_scan(const CostParams& p) {
  p.validate();
  if (p.theta_update == 0) return kMaxThreshold;
  const double delta = delta_cost(p);
  const auto delta_wins = [&](uint64_t d) {
    const double pivot = pivot_cost(p, static_cast<double>(d));
    return delta <= pivot + 1e-9 * std::max(1.0, pivot);
  };
  if (delta_wins(0)) return 0;
  // pivot_cost is strictly increasing in d: gallop, then bisect.
  uint64_t lo = 0;  // delta loses at lo
  uint64_t hi = 1;
  while (!delta_wins(hi)) {
    lo = hi;
    if (hi >= kMaxThreshold) return kMaxThreshold;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const uint64_t mid = lo + (hi - lo) / 2;
    if (delta_wins(mid)) hi = mid;
    else lo = mid;
  }
  return std::min(hi, kMaxThreshold);
}

UpdateKind choose_update(double estimated_degree, const CostParams& p, bool saturated) {
  if (saturated) return UpdateKind::kDelta;
  const uint64_t t = threshold(p);
  // The cap means delta never pays off in the searched range.
  if (t >= kMaxThreshold) return UpdateKind::kPivot;
  return estimated_degree >= static_cast<double>(t) ? UpdateKind::kDelta : UpdateKind::kPivot;
}

double level_hit_probability(int level_offset, double size_ratio, double avg_degree) {
  if (level_offset < 1) throw_invalid("level offset must be >= 1");
  if (size_ratio < 2) throw_invalid("size ratio must be >= 2");
  if (avg_degree < 0) throw_invalid("average degree must be >= 0");
  return 1 - std::exp(-(size_ratio - 1) * avg_degree / std::pow(size_ratio, 1 + level_offset));
}

double expected_retrieval_cost(int levels, double size_ratio, double avg_degree) {
  if (levels < 1) throw_invalid("levels must be >= 1");
  double sum = 0;
  for (int i = 1; i <= levels - 1; ++i) sum += level_hit_probability(i, size_ratio, avg_degree);
  return sum;
}

}  // namespace plsm::policy
