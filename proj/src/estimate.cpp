#include "affwalk/estimate.hpp"

#include <cmath>

namespace affwalk {

void RunningMoments::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.count_ == 0) {
    return;
  }
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  count_ += other.count_;
}

double RunningMoments::variance() const {
  return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double RunningMoments::std_error() const {
  return count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

EstimateWithError RunningMoments::to_estimate(std::uint64_t seed) const {
  return {mean_, std_error(), count_, seed};
}

RunningMoments merge_in_order(const std::vector<RunningMoments>& parts) {
  RunningMoments total;
  for (const auto& p : parts) {
    total.merge(p);
  }
  return total;
}

RatioWithError ratio_of(double num, double num_se, double den, double den_se) {
  const double r = num / den;
  const double rel = std::hypot(num_se / num, den_se / den);
  return {r, std::abs(r) * rel};
}

}  // namespace affwalk
