#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace affwalk {

/// Monte Carlo point estimate with its standard error
/// (sample standard deviation / sqrt(samples)).
struct EstimateWithError {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Streaming mean / variance (Welford), mergeable with Chan's update.
class RunningMoments {
public:
  void add(double x);
  void merge(const RunningMoments& other);

  [[nodiscard]] std::uint64_t count() const { return count_; }
  [[nodiscard]] double mean() const { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  [[nodiscard]] double variance() const;
  [[nodiscard]] double std_error() const;
  [[nodiscard]] EstimateWithError to_estimate(std::uint64_t seed) const;

private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Merges per-stream moments in stream order; order-fixed so the result is
/// bitwise independent of how streams were scheduled.
RunningMoments merge_in_order(const std::vector<RunningMoments>& parts);

/// Ratio X/Y of two independent estimates with delta-method error.
struct RatioWithError {
  double ratio = 0.0;
  double std_error = 0.0;
};
RatioWithError ratio_of(double num, double num_se, double den, double den_se);

}  // namespace affwalk
