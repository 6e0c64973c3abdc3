#include "plsm/policy/workload_tracker.hpp"

#include "plsm/error.hpp"

namespace plsm::policy {

WorkloadTracker::WorkloadTracker(size_t window, size_t min_observations, double prior_lookup)
    : window_(window), min_observations_(min_observations), prior_lookup_(prior_lookup) {
  if (window == 0) throw_invalid("workload window must be positive");
  if (prior_lookup < 0 || prior_lookup > 1) throw_invalid("lookup prior must lie in [0,1]");
  ring_.resize(window_);
}

void WorkloadTracker::observe(OpKind kind) {
  std::lock_guard lock(mu_);
  if (filled_ == window_) {
    if (ring_[head_] == OpKind::kLookup) --lookups_;
  } else {
    ++filled_;
  }
  ring_[head_] = kind;
  if (kind == OpKind::kLookup) ++lookups_;
  head_ = (head_ + 1) % window_;
}

double WorkloadTracker::theta_lookup() const {
  std::lock_guard lock(mu_);
  if (filled_ < min_observations_ || filled_ == 0) return prior_lookup_;
  return static_cast<double>(lookups_) / static_cast<double>(filled_);
}

size_t WorkloadTracker::window_lookups() const {
  std::lock_guard lock(mu_);
  return lookups_;
}

size_t WorkloadTracker::window_count() const {
  std::lock_guard lock(mu_);
  return filled_;
}

void WorkloadTracker::reset() {
  std::lock_guard lock(mu_);
  head_ = filled_ = lookups_ = 0;
}

}  // namespace plsm::policy
