#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "affwalk/group.hpp"
#include "affwalk/rng.hpp"

namespace affwalk {

enum class InnovationKind { bernoulli, gaussian };

/// Laws of the X (driving) and Y (translation) innovations. Both are
/// symmetric with unit variance and mutually independent.
struct InnovationSpec {
  InnovationKind x = InnovationKind::bernoulli;
  InnovationKind y = InnovationKind::bernoulli;
};

/// Trajectory of x_{k+1} = x_k (e^{eps X_{k+1}}, eps Y_{k+1}) started at e.
/// s[k] = S_k = X_1 + ... + X_k, y[k-1] = Y_k, b_terms[k] = b_k.
struct WalkPath {
  double epsilon = 0.0;
  std::size_t n = 0;
  std::vector<double> s;
  std::vector<double> y;
  std::vector<double> b_terms;
  std::uint64_t seed = 0;

  [[nodiscard]] double a(std::size_t k) const;
  [[nodiscard]] double b(std::size_t k) const { return b_terms.at(k); }
  [[nodiscard]] GroupElement point(std::size_t k) const { return {a(k), b(k)}; }
};

/// Builds the path for given innovations; b_k uses compensated summation.
WalkPath build_walk(double epsilon, const std::vector<double>& xs, const std::vector<double>& ys,
                    std::uint64_t seed = 0);

/// Draws X_1..X_n, then Y_1..Y_n, from Philox4x64(seed, 0).
WalkPath simulate_walk(std::size_t n, double epsilon, const InnovationSpec& spec,
                       std::uint64_t seed);

/// Fills steps[0..n) with a uniformly random arrangement of n/2 up and n/2
/// down steps (sequential urn, exact integer draws).
void bridge_steps(std::size_t n, Philox4x64& rng, std::vector<int>& steps);

/// Simple walk conditioned on S_n = 0. Only s is populated; epsilon is 0.
WalkPath simulate_bridge_walk(std::size_t n, std::uint64_t seed);

/// Level statistics of a walk with integer S.
///   visits_at(a)      = #{k : 0 < k <= n, S_k = a}        (the L(n, a) of the local-time laws)
///   departures_from(a) = #{k : 1 <= k <= n, S_{k-1} = a}  (the weights of the occupation formula)
class LocalTimeProfile {
public:
  LocalTimeProfile() = default;
  LocalTimeProfile(long min_level, long max_level);

  [[nodiscard]] long min_level() const { return min_level_; }
  [[nodiscard]] long max_level() const { return max_level_; }
  [[nodiscard]] std::uint64_t visits_at(long a) const;
  [[nodiscard]] std::uint64_t departures_from(long a) const;
  /// Sum of Y_k over k with S_{k-1} = a.
  [[nodiscard]] double y_sum_at(long a) const;
  [[nodiscard]] std::uint64_t total_visits() const;

  void record(long from, long to, double y);

private:
  [[nodiscard]] std::size_t index(long a) const { return static_cast<std::size_t>(a - min_level_); }
  [[nodiscard]] bool inside(long a) const { return a >= min_level_ && a <= max_level_; }

  long min_level_ = 0;
  long max_level_ = 0;
  std::vector<std::uint64_t> visits_;
  std::vector<std::uint64_t> departures_;
  std::vector<double> y_sums_;
};

/// Requires integer S (Bernoulli X); min/max levels include S_0 = 0.
LocalTimeProfile local_time_profile(const WalkPath& path);

/// b_n = eps * sum_a (sum_{k : S_{k-1} = a} Y_k) e^{eps a}.
double occupation_b(const LocalTimeProfile& profile, double epsilon);

/// n = floor(t / eps^2), with quotients within 1e-9 of an integer taken as
/// that integer (1 / 0.1^2 evaluates to 99.999...).
std::size_t donsker_scale(double t, double epsilon);

enum class GridRule { left, trapezoid };

/// One discretized standard Brownian bridge functional on [0, 1].
struct BridgeIntegral {
  double integral = 0.0;       // (1/m) sum_j e^{alpha b_{u_j}}
  double integral_half = 0.0;  // same on the even-index subgrid of size m/2
  double min = 0.0;
  double max = 0.0;
};

/// b_j = W_j - (j/m) W_m from Gaussian increments of variance 1/m. Since
/// b_0 = b_m = 0 the left and trapezoid rules coincide; both are provided.
BridgeIntegral bridge_exp_integral(double alpha, std::size_t m, Philox4x64& rng,
                                   std::vector<double>& scratch,
                                   GridRule rule = GridRule::left);

struct BridgeFunctional {
  double t = 0.0;
  std::size_t m = 0;
  double value = 0.0;       // t * int_0^1 exp(2 sqrt(t) b_u) du
  double value_half = 0.0;  // on the m/2 subgrid
  double min = 0.0;
  double max = 0.0;
};

BridgeFunctional sample_bridge_functional(double t, std::size_t m, Philox4x64& rng,
                                          std::vector<double>& scratch,
                                          GridRule rule = GridRule::left);
BridgeFunctional sample_bridge_functional(double t, std::size_t m, std::uint64_t seed,
                                          GridRule rule = GridRule::left);

/// eps^2 sum_{j=1}^n exp(2 eps S_{j-1}) along a bridge walk, eps = sqrt(t/n).
class WalkBridgeSampler {
public:
  WalkBridgeSampler(double t, std::size_t n);

  [[nodiscard]] double t() const { return t_; }
  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] double epsilon() const { return epsilon_; }

  /// Draws a bridge walk and returns the functional.
  double sample(Philox4x64& rng);
  /// Draws a bridge walk with Bernoulli Y and returns b_n; the functional of
  /// the same path is stored in *functional when non-null.
  double sample_b(Philox4x64& rng, double* functional = nullptr);

private:
  double t_;
  std::size_t n_;
  double epsilon_;
  std::vector<double> exp2_;  // exp(2 eps a), a in [-n/2, n/2]
  std::vector<double> exp1_;  // exp(eps a)
  std::vector<int> steps_;
  std::vector<long> y_sums_;
  std::vector<std::uint32_t> departures_;
};

double walk_bridge_functional(double t, std::size_t n, std::uint64_t seed);

/// Maximum and |minimum| of a bridge walk path.
struct BridgeExtremes {
  long max = 0;
  long neg_min = 0;
};
BridgeExtremes bridge_extremes(std::size_t n, Philox4x64& rng, std::vector<int>& steps);

}  // namespace affwalk
