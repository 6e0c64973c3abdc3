#pragma once

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <vector>

namespace plsm::policy {

enum class OpKind : uint8_t { kLookup, kUpdate };

struct WorkloadStats {
  uint64_t vertices = 0;      // n
  uint64_t edges = 0;         // m
  uint64_t half_edges = 0;    // adjacency-list entries, sum of d(u)
  size_t window_lookups = 0;
  size_t window_updates = 0;
  size_t window_size = 0;

  // m / n
  double avg_degree() const {
    return vertices == 0 ? 0.0 : static_cast<double>(edges) / static_cast<double>(vertices);
  }
};

// Sliding-window estimate of the lookup/update mix. Until `min_observations`
// operations have been seen the configured prior is reported.
class WorkloadTracker {
 public:
  explicit WorkloadTracker(size_t window = 1024, size_t min_observations = 64,
                           double prior_lookup = 0.5);

  void observe(OpKind kind);
  double theta_lookup() const;
  double theta_update() const { return 1.0 - theta_lookup(); }

  size_t window_lookups() const;
  size_t window_count() const;
  size_t window_size() const { return window_; }
  void reset();

 private:
  const size_t window_;
  const size_t min_observations_;
  const double prior_lookup_;

  mutable std::mutex mu_;
  std::vector<OpKind> ring_;
  size_t head_ = 0;
  size_t filled_ = 0;
  size_t lookups_ = 0;
};

}  // namespace plsm::policy
