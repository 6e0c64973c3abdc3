#include "plsm/workload/rng.hpp"

#include <algorithm>
#include <cmath>

#include "plsm/error.hpp"

namespace plsm::workload {

WeightedSampler::WeightedSampler(const std::vector<double>& weights) {
  if (weights.empty()) throw_invalid("sampler needs at least one weight");
  cdf_.reserve(weights.size());
  double sum = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw_invalid("negative sampling weight");
    sum += w;
    cdf_.push_back(sum);
  }
  if (!(sum > 0)) throw_invalid("sampling weights sum to zero");
}

size_t WeightedSampler::sample(Rng& rng) const {
  const double x = rng.unit() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
  return std::min(static_cast<size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

WeightedSampler zipf_sampler(size_t n, double exponent) {
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) w[i] = std::pow(static_cast<double>(i + 1), -exponent);
  return WeightedSampler(w);
}

}  // namespace plsm::workload
