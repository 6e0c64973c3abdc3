#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace plsm::workload {

// mt19937_64 is specified bit-exactly by the standard; the distributions are
// not, so the helpers below are written out to keep runs reproducible
// across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // Uniform in [0, n), n > 0.
  uint64_t below(uint64_t n) {
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      const uint64_t x = gen_();
      if (x >= threshold) return x % n;
    }
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

// Samples indices 0..weights.size()-1 proportionally to the weights.
class WeightedSampler {
 public:
  explicit WeightedSampler(const std::vector<double>& weights);
  size_t sample(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

// Zipf over n ranks: rank i has weight 1 / (i+1)^exponent.
WeightedSampler zipf_sampler(size_t n, double exponent);

}  // namespace plsm::workload
