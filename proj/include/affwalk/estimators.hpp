#pragma once

#include <cstddef>
#include <cstdint>

#include "affwalk/estimate.hpp"
#include "affwalk/parallel.hpp"

namespace affwalk {

enum class MollifierFamily { fejer };

/// g_delta(x) = g(x / delta) / delta with g the Fejer kernel
/// (1 / 2 pi) (sin(x/2) / (x/2))^2, whose Fourier transform is (1 - |xi|)_+.
struct MollifierSpec {
  double delta = 1.0;
  MollifierFamily family = MollifierFamily::fejer;
};

double fejer(double x);
/// int g(x) e^{i x xi} dx.
double fejer_transform(double xi);
double mollifier_eval(const MollifierSpec& spec, double x);

struct QuasiLocalConfig {
  double t = 4.0;
  std::size_t n = 16384;
  double gamma = 0.25;

  [[nodiscard]] double epsilon() const;  // (t/n)^{1/2}
  [[nodiscard]] double delta() const;    // t^{1/2} n^{-1/2 + gamma}
  /// Throws std::invalid_argument naming the admissible interval (0, 1/2)
  /// for gamma, or on odd n / nonpositive t.
  void validate() const;
};

/// P[S_n = 0] = C(n, n/2) 2^{-n} for the simple walk, n even.
double simple_return_probability(std::size_t n);

struct P2Result {
  EstimateWithError estimate;       // p_2(t, 0) = E[(2 pi A~(t))^{-1/2}], grid m
  EstimateWithError estimate_half;  // same paths on the m/2 subgrid
  double t = 0.0;
  std::size_t m = 0;
  double t_times = 0.0;             // t * estimate
  double t_times_se = 0.0;
  double min_a_tilde = 0.0;         // smallest sampled A~(t)
};

/// Monte Carlo of E[1 / sqrt(2 pi A~(t))], A~(t) = t int_0^1 exp(2 sqrt(t) b_u) du
/// over a discretized standard bridge. Nothing is clipped.
P2Result p2_zero(double t, std::uint64_t samples, std::size_t m, std::uint64_t seed,
                 const ParallelOptions& opts = {});

struct QuasiLocalResult {
  QuasiLocalConfig config;
  EstimateWithError estimate;     // P[S_n = 0] E[g_delta(b_n) | S_n = 0]
  double return_probability = 0.0;
  EstimateWithError conditional;  // E[g_delta(b_n) | S_n = 0]
  P2Result p2;
  double comparator = 0.0;        // 2 eps_n / (t^{1/2} sqrt(2 pi)) p_2(t, 0)
  double comparator_se = 0.0;
  RatioWithError ratio;
};

struct ComparatorBudget {
  std::uint64_t samples = 100000;
  std::size_t m = 4096;
  std::uint64_t seed_offset = 1;  // p2 runs on seed + seed_offset
};

QuasiLocalResult quasi_local_estimator(const QuasiLocalConfig& cfg, std::uint64_t samples,
                                       std::uint64_t seed, const ComparatorBudget& comparator = {},
                                       const ParallelOptions& opts = {});

/// Same estimate without the comparator run.
EstimateWithError quasi_local_value(const QuasiLocalConfig& cfg, std::uint64_t samples,
                                    std::uint64_t seed, const ParallelOptions& opts = {});

struct MixedLltResult {
  double t = 0.0;
  std::size_t n = 0;
  EstimateWithError estimate;     // P[S_n = 0] E[(2 pi A~_n(t))^{-1/2} | S_n = 0]
  EstimateWithError conditional;  // E[(2 pi A~_n(t))^{-1/2} | S_n = 0]
  double return_probability = 0.0;
  double comparator = 0.0;        // 2 eps_n p_aff(t, e, e)
  double ratio = 0.0;
  double ratio_se = 0.0;
  double gaussian_prefactor = 0.0;  // 2 / sqrt(2 pi n)
  double stirling_ratio = 0.0;      // estimate / (gaussian_prefactor * conditional)
};

/// Density at 0 of b_n restricted to {S_n = 0} for Gaussian Y innovations,
/// by conditioning on the bridge: given X, b_n is centred normal with
/// variance A~_n(t).
MixedLltResult mixed_llt_density(double t, std::size_t n, std::uint64_t samples,
                                 std::uint64_t seed, const ParallelOptions& opts = {});

/// E[(int_0^1 e^{alpha b_u} du)^{-theta}] over a discretized standard bridge.
EstimateWithError neg_moment_bridge(double alpha, double theta, std::uint64_t samples,
                                    std::size_t m, std::uint64_t seed,
                                    const ParallelOptions& opts = {});

/// E[1 / A~(t)], A~(t) = int_0^t exp(2 B~_s) ds for a bridge B~ on [0, t].
EstimateWithError inverse_bridge_functional(double t, std::uint64_t samples, std::size_t m,
                                            std::uint64_t seed, const ParallelOptions& opts = {});

/// E[exp(theta M+_n / sqrt n) + exp(theta M-_n / sqrt n)] over bridge walks,
/// M+ the maximum and M- the absolute value of the minimum.
EstimateWithError conditioned_max_moment(std::size_t n, double theta, std::uint64_t samples,
                                         std::uint64_t seed, const ParallelOptions& opts = {});

}  // namespace affwalk
