#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "affwalk/estimate.hpp"
#include "affwalk/parallel.hpp"
#include "affwalk/rational.hpp"

namespace affwalk {

/// P[L(2n, a) = k] for the simple walk, L(2n, a) = #{0 < j <= 2n : S_j = a}.
/// Zero outside the support.
Rational local_time_pmf(unsigned n, long a, long k);

/// Brute force over all 2^{2n} paths: counts[(a, k)] = #{paths : L(2n, a) = k}
/// for every level |a| <= 2n (k = 0 included).
std::map<std::pair<long, long>, std::uint64_t> local_time_enumeration(unsigned n);

inline constexpr unsigned kEnumerationCap = 24;

enum class ReturnMethod { enumeration, edge_dp, rao_blackwell, naive };

std::string to_string(ReturnMethod m);

struct ReturnProbability {
  unsigned n2 = 0;  // horizon 2n
  ReturnMethod method = ReturnMethod::enumeration;
  std::optional<Rational> exact;
  std::optional<EstimateWithError> estimate;

  [[nodiscard]] double value() const;
};

/// pi_{2n} by enumerating every X-path (Gray-code order, incremental
/// departure counts). A path contributes prod_a C(D_a, D_a/2) 2^{-D_a}, the
/// probability that the Y-innovations departing each level a sum to zero.
/// Refuses n2 above `cap`.
Rational exact_return_prob(unsigned n2, unsigned cap = kEnumerationCap, unsigned workers = 1);

/// pi_{2n} from a recursion over edge-crossing counts of the closed walk:
/// the number of closed paths with e_a up-crossings of each edge (a, a+1) is a
/// product of per-level binomials in the departure counts D_a = e_a + e_{a-1}.
/// Polynomial in n; agrees with exact_return_prob where both run.
Rational exact_return_prob_dp(unsigned n2);

/// Unbiased estimate of pi_{2n}: samples X-paths only and averages the exact
/// conditional return probability given X.
EstimateWithError rb_return_estimator(unsigned n2, std::uint64_t samples, std::uint64_t seed,
                                      const ParallelOptions& opts = {});

/// Plain indicator estimate: samples X and Y, scores 1 when S_{2n} = 0 and every
/// per-level Y-sum vanishes.
EstimateWithError naive_return_estimator(unsigned n2, std::uint64_t samples, std::uint64_t seed,
                                         const ParallelOptions& opts = {});

/// Decay normalization n^{1/3} ln^{2/3} n.
double decay_scale(double n);

struct DecayFit {
  std::vector<double> n;               // half-horizons, strictly increasing
  std::vector<double> neg_log_pi;      // -ln pi_{2n}
  std::vector<double> normalized;      // -ln pi_{2n} / decay_scale(n)
  double c = 0.0;                      // least-squares fit of -ln pi = c decay_scale(n)
  double band_min = 0.0;
  double band_max = 0.0;
  double band_ratio = 0.0;
  double tail_slope = 0.0;             // d ln(normalized) / d ln n on the top half of the grid
};

/// Takes (n, pi_{2n}) pairs; needs at least four points with n >= 2 and
/// 0 < pi < 1.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& probs);
/// Same from (n, -ln pi_{2n}), for values below double range.
DecayFit fit_decay_log(const std::vector<std::pair<double, double>>& neg_logs);

/// floor(m_n / ln n), m_n = n^{1/3} ln^{2/3} n / ln 2.
long tube_halfwidth(unsigned n);

struct TubeResult {
  unsigned n = 0;  // horizon 2n
  long halfwidth = 0;
  double exact = 0.0;
  std::optional<Rational> exact_rational;  // for 2n <= 64
  std::optional<EstimateWithError> estimate;
};

inline constexpr unsigned kTubeRationalCap = 64;

/// P[|S_k| <= halfwidth for all k <= 2n] by the transfer matrix on the
/// 2 halfwidth + 1 interior states, plus a Monte Carlo estimate when
/// samples > 0.
TubeResult tube_probability(unsigned n, long halfwidth, std::uint64_t seed = 0,
                            std::uint64_t samples = 0, const ParallelOptions& opts = {});

}  // namespace affwalk
