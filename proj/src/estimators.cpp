#include "affwalk/estimators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "affwalk/group.hpp"
#include "affwalk/heat_kernel.hpp"
#include "affwalk/walk.hpp"

namespace affwalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_even(std::size_t n, const char* who) {
  if (n == 0 || n % 2 != 0) {
    throw std::invalid_argument(std::string(who) + ": n must be even and positive");
  }
}

void require_grid(std::size_t m, const char* who) {
  if (m < 2) {
    throw std::invalid_argument(std::string(who) + ": grid size must be at least 2");
  }
}

}  // namespace

double fejer(double x) {
  const double u = 0.5 * x;
  const double s = std::abs(u) < 1e-4 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
  return s * s / kTwoPi;
}

double fejer_transform(double xi) { return std::max(0.0, 1.0 - std::abs(xi)); }

double mollifier_eval(const MollifierSpec& spec, double x) {
  if (!(spec.delta > 0.0)) {
    throw std::invalid_argument("mollifier_eval: delta must be positive");
  }
  return fejer(x / spec.delta) / spec.delta;
}

double QuasiLocalConfig::epsilon() const { return std::sqrt(t / static_cast<double>(n)); }

double QuasiLocalConfig::delta() const {
  return std::sqrt(t) * std::pow(static_cast<double>(n), -0.5 + gamma);
}

void QuasiLocalConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    std::ostringstream msg;
    msg << "gamma = " << gamma
        << " is outside the admissible interval (0, 1/2) of the quasi-local theorem";
    throw std::invalid_argument(msg.str());
  }
  if (!(t > 0.0)) {
    throw std::invalid_argument("quasi-local: t must be positive");
  }
  require_even(n, "quasi-local");
}

double simple_return_probability(std::size_t n) {
  require_even(n, "simple_return_probability");
  const double nn = static_cast<double>(n);
  return std::exp(std::lgamma(nn + 1.0) - 2.0 * std::lgamma(0.5 * nn + 1.0) -
                  nn * std::numbers::ln2);
}

P2Result p2_zero(double t, std::uint64_t samples, std::size_t m, std::uint64_t seed,
                 const ParallelOptions& opts) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("p2_zero: t must be positive");
  }
  require_grid(m, "p2_zero");
  struct Sampler {
    double t;
    std::size_t m;
    std::vector<double> scratch;
    void operator()(Philox4x64& rng, double* out) {
      const auto f = sample_bridge_functional(t, m, rng, scratch);
      out[0] = 1.0 / std::sqrt(kTwoPi * f.value);
      out[1] = 1.0 / std::sqrt(kTwoPi * f.value_half);
      out[2] = f.value;
    }
  };
  const auto multi = monte_carlo_multi(samples, seed, 3, Sampler{t, m, {}}, opts);
  P2Result r;
  r.estimate = multi.means[0];
  r.estimate_half = multi.means[1];
  r.t = t;
  r.m = m;
  r.t_times = t * r.estimate.estimate;
  r.t_times_se = t * r.estimate.std_error;
  r.min_a_tilde = multi.mins[2];
  return r;
}

EstimateWithError quasi_local_value(const QuasiLocalConfig& cfg, std::uint64_t samples,
                                    std::uint64_t seed, const ParallelOptions& opts) {
  cfg.validate();
  const MollifierSpec g{cfg.delta(), MollifierFamily::fejer};
  const WalkBridgeSampler base(cfg.t, cfg.n);
  auto sampler = [g, walker = base](Philox4x64& rng) mutable {
    return mollifier_eval(g, walker.sample_b(rng));
  };
  const auto conditional = monte_carlo_mean(samples, seed, sampler, opts);
  const double p = simple_return_probability(cfg.n);
  EstimateWithError out = conditional;
  out.estimate *= p;
  out.std_error *= p;
  return out;
}

QuasiLocalResult quasi_local_estimator(const QuasiLocalConfig& cfg, std::uint64_t samples,
                                       std::uint64_t seed, const ComparatorBudget& comparator,
                                       const ParallelOptions& opts) {
  QuasiLocalResult r;
  r.config = cfg;
  r.estimate = quasi_local_value(cfg, samples, seed, opts);
  r.return_probability = simple_return_probability(cfg.n);
  r.conditional = r.estimate;
  r.conditional.estimate /= r.return_probability;
  r.conditional.std_error /= r.return_probability;
  r.p2 = p2_zero(cfg.t, comparator.samples, comparator.m, seed + comparator.seed_offset, opts);
  const double scale = 2.0 * cfg.epsilon() / (std::sqrt(cfg.t) * std::sqrt(kTwoPi));
  r.comparator = scale * r.p2.estimate.estimate;
  r.comparator_se = scale * r.p2.estimate.std_error;
  r.ratio = ratio_of(r.estimate.estimate, r.estimate.std_error, r.comparator, r.comparator_se);
  return r;
}

MixedLltResult mixed_llt_density(double t, std::size_t n, std::uint64_t samples,
                                 std::uint64_t seed, const ParallelOptions& opts) {
  require_even(n, "mixed_llt_density");
  const WalkBridgeSampler base(t, n);
  auto sampler = [walker = base](Philox4x64& rng) mutable {
    return 1.0 / std::sqrt(kTwoPi * walker.sample(rng));
  };
  MixedLltResult r;
  r.t = t;
  r.n = n;
  r.conditional = monte_carlo_mean(samples, seed, sampler, opts);
  r.return_probability = simple_return_probability(n);
  r.estimate = r.conditional;
  r.estimate.estimate *= r.return_probability;
  r.estimate.std_error *= r.return_probability;
  const GroupElement e;
  r.comparator = 2.0 * base.epsilon() * p_aff(t, e, e).value;
  r.ratio = r.estimate.estimate / r.comparator;
  r.ratio_se = r.estimate.std_error / r.comparator;
  r.gaussian_prefactor = 2.0 / std::sqrt(kTwoPi * static_cast<double>(n));
  r.stirling_ratio = r.estimate.estimate / (r.gaussian_prefactor * r.conditional.estimate);
  return r;
}

EstimateWithError neg_moment_bridge(double alpha, double theta, std::uint64_t samples,
                                    std::size_t m, std::uint64_t seed,
                                    const ParallelOptions& opts) {
  require_grid(m, "neg_moment_bridge");
  struct Sampler {
    double alpha;
    double theta;
    std::size_t m;
    std::vector<double> scratch;
    double operator()(Philox4x64& rng) {
      const auto bi = bridge_exp_integral(alpha, m, rng, scratch);
      return std::pow(bi.integral, -theta);
    }
  };
  return monte_carlo_mean(samples, seed, Sampler{alpha, theta, m, {}}, opts);
}

EstimateWithError inverse_bridge_functional(double t, std::uint64_t samples, std::size_t m,
                                            std::uint64_t seed, const ParallelOptions& opts) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("inverse_bridge_functional: t must be positive");
  }
  require_grid(m, "inverse_bridge_functional");
  struct Sampler {
    double t;
    std::size_t m;
    std::vector<double> scratch;
    double operator()(Philox4x64& rng) {
      return 1.0 / sample_bridge_functional(t, m, rng, scratch).value;
    }
  };
  return monte_carlo_mean(samples, seed, Sampler{t, m, {}}, opts);
}

EstimateWithError conditioned_max_moment(std::size_t n, double theta, std::uint64_t samples,
                                         std::uint64_t seed, const ParallelOptions& opts) {
  require_even(n, "conditioned_max_moment");
  const double scale = theta / std::sqrt(static_cast<double>(n));
  struct Sampler {
    std::size_t n;
    double scale;
    std::vector<int> steps;
    double operator()(Philox4x64& rng) {
      const auto ext = bridge_extremes(n, rng, steps);
      return std::exp(scale * static_cast<double>(ext.max)) +
             std::exp(scale * static_cast<double>(ext.neg_min));
    }
  };
  return monte_carlo_mean(samples, seed, Sampler{n, scale, {}}, opts);
}

}  // namespace affwalk
