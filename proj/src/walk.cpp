#include "affwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "affwalk/estimate.hpp"

namespace affwalk {

namespace {

void require_even(std::size_t n, const char* who) {
  if (n == 0 || n % 2 != 0) {
    throw std::invalid_argument(std::string(who) + ": n must be even and positive");
  }
}

double draw(InnovationKind kind, Philox4x64& rng) {
  return kind == InnovationKind::bernoulli ? static_cast<double>(rng.sign()) : rng.normal();
}

long as_level(double s) {
  const double r = std::round(s);
  if (r != s) {
    throw std::invalid_argument("local_time_profile: walk levels must be integers");
  }
  return static_cast<long>(r);
}

}  // namespace

double WalkPath::a(std::size_t k) const { return std::exp(epsilon * s.at(k)); }

WalkPath build_walk(double epsilon, const std::vector<double>& xs, const std::vector<double>& ys,
                    std::uint64_t seed) {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("build_walk: epsilon must be positive");
  }
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("build_walk: X and Y sequences differ in length");
  }
  WalkPath path;
  path.epsilon = epsilon;
  path.n = xs.size();
  path.seed = seed;
  path.y = ys;
  path.s.resize(path.n + 1);
  path.b_terms.resize(path.n + 1);
  path.s[0] = 0.0;
  path.b_terms[0] = 0.0;
  CompensatedSum b;
  for (std::size_t k = 0; k < path.n; ++k) {
    b.add(ys[k] * std::exp(epsilon * path.s[k]));
    path.s[k + 1] = path.s[k] + xs[k];
    path.b_terms[k + 1] = epsilon * b.value();
  }
  return path;
}

WalkPath simulate_walk(std::size_t n, double epsilon, const InnovationSpec& spec,
                       std::uint64_t seed) {
  if (n == 0) {
    throw std::invalid_argument("simulate_walk: n must be at least 1");
  }
  Philox4x64 rng(seed, 0);
  std::vector<double> xs(n);
  std::vector<double> ys(n);
  for (auto& x : xs) {
    x = draw(spec.x, rng);
  }
  for (auto& y : ys) {
    y = draw(spec.y, rng);
  }
  return build_walk(epsilon, xs, ys, seed);
}

void bridge_steps(std::size_t n, Philox4x64& rng, std::vector<int>& steps) {
  require_even(n, "bridge_steps");
  steps.resize(n);
  auto ups = static_cast<std::uint32_t>(n / 2);
  auto downs = ups;
  for (std::size_t k = 0; k < n; ++k) {
    if (rng.bounded32(ups + downs) < ups) {
      steps[k] = 1;
      --ups;
    } else {
      steps[k] = -1;
      --downs;
    }
  }
}

WalkPath simulate_bridge_walk(std::size_t n, std::uint64_t seed) {
  require_even(n, "simulate_bridge_walk");
  Philox4x64 rng(seed, 0);
  std::vector<int> steps;
  bridge_steps(n, rng, steps);
  WalkPath path;
  path.n = n;
  path.seed = seed;
  path.s.resize(n + 1);
  path.s[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    path.s[k + 1] = path.s[k] + steps[k];
  }
  return path;
}

LocalTimeProfile::LocalTimeProfile(long min_level, long max_level)
    : min_level_(min_level), max_level_(max_level) {
  if (min_level > 0 || max_level < 0) {
    throw std::invalid_argument("LocalTimeProfile: level range must contain 0");
  }
  const auto width = static_cast<std::size_t>(max_level - min_level + 1);
  visits_.assign(width, 0);
  departures_.assign(width, 0);
  y_sums_.assign(width, 0.0);
}

std::uint64_t LocalTimeProfile::visits_at(long a) const {
  return inside(a) ? visits_[index(a)] : 0;
}

std::uint64_t LocalTimeProfile::departures_from(long a) const {
  return inside(a) ? departures_[index(a)] : 0;
}

double LocalTimeProfile::y_sum_at(long a) const { return inside(a) ? y_sums_[index(a)] : 0.0; }

std::uint64_t LocalTimeProfile::total_visits() const {
  std::uint64_t total = 0;
  for (auto v : visits_) {
    total += v;
  }
  return total;
}

void LocalTimeProfile::record(long from, long to, double y) {
  if (!inside(from) || !inside(to)) {
    throw std::out_of_range("LocalTimeProfile::record: level outside profile");
  }
  ++departures_[index(from)];
  y_sums_[index(from)] += y;
  ++visits_[index(to)];
}

LocalTimeProfile local_time_profile(const WalkPath& path) {
  long lo = 0;
  long hi = 0;
  for (double s : path.s) {
    const long level = as_level(s);
    lo = std::min(lo, level);
    hi = std::max(hi, level);
  }
  LocalTimeProfile profile(lo, hi);
  for (std::size_t k = 0; k < path.n; ++k) {
    const double y = path.y.empty() ? 0.0 : path.y[k];
    profile.record(as_level(path.s[k]), as_level(path.s[k + 1]), y);
  }
  return profile;
}

double occupation_b(const LocalTimeProfile& profile, double epsilon) {
  CompensatedSum b;
  for (long a = profile.min_level(); a <= profile.max_level(); ++a) {
    const double y = profile.y_sum_at(a);
    if (y != 0.0) {
      b.add(y * std::exp(epsilon * static_cast<double>(a)));
    }
  }
  return epsilon * b.value();
}

std::size_t donsker_scale(double t, double epsilon) {
  if (!(t > 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("donsker_scale: t and epsilon must be positive");
  }
  const double q = t / (epsilon * epsilon);
  const double nearest = std::round(q);
  if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, q)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::floor(q));
}

BridgeIntegral bridge_exp_integral(double alpha, std::size_t m, Philox4x64& rng,
                                   std::vector<double>& scratch, GridRule rule) {
  if (m < 2) {
    throw std::invalid_argument("bridge_exp_integral: grid size must be at least 2");
  }
  scratch.resize(m + 1);
  const double sd = 1.0 / std::sqrt(static_cast<double>(m));
  scratch[0] = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    scratch[j] = scratch[j - 1] + sd * rng.normal();
  }
  const double w_end = scratch[m];
  const double inv_m = 1.0 / static_cast<double>(m);
  BridgeIntegral out;
  double sum = 0.0;
  double sum_even = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double b = scratch[j] - static_cast<double>(j) * inv_m * w_end;
    out.min = std::min(out.min, b);
    out.max = std::max(out.max, b);
    const double e = std::exp(alpha * b);
    sum += e;
    if (j % 2 == 0) {
      sum_even += e;
    }
  }
  if (rule == GridRule::trapezoid) {
    const double b_last = scratch[m] - w_end;
    sum += 0.5 * (std::exp(alpha * b_last) - std::exp(alpha * scratch[0]));
  }
  out.integral = sum * inv_m;
  out.integral_half = sum_even * 2.0 * inv_m;
  return out;
}

BridgeFunctional sample_bridge_functional(double t, std::size_t m, Philox4x64& rng,
                                          std::vector<double>& scratch, GridRule rule) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("sample_bridge_functional: t must be positive");
  }
  const auto bi = bridge_exp_integral(2.0 * std::sqrt(t), m, rng, scratch, rule);
  return {t, m, t * bi.integral, t * bi.integral_half, bi.min, bi.max};
}

BridgeFunctional sample_bridge_functional(double t, std::size_t m, std::uint64_t seed,
                                          GridRule rule) {
  Philox4x64 rng(seed, 0);
  std::vector<double> scratch;
  return sample_bridge_functional(t, m, rng, scratch, rule);
}

WalkBridgeSampler::WalkBridgeSampler(double t, std::size_t n)
    : t_(t), n_(n), epsilon_(std::sqrt(t / static_cast<double>(n))) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("WalkBridgeSampler: t must be positive");
  }
  require_even(n, "WalkBridgeSampler");
  const long half = static_cast<long>(n / 2);
  exp1_.resize(n + 1);
  exp2_.resize(n + 1);
  for (long a = -half; a <= half; ++a) {
    exp1_[static_cast<std::size_t>(a + half)] = std::exp(epsilon_ * static_cast<double>(a));
    exp2_[static_cast<std::size_t>(a + half)] = std::exp(2.0 * epsilon_ * static_cast<double>(a));
  }
  y_sums_.assign(n + 1, 0);
  departures_.assign(n + 1, 0);
}

double WalkBridgeSampler::sample(Philox4x64& rng) {
  auto ups = static_cast<std::uint32_t>(n_ / 2);
  auto downs = ups;
  std::size_t level = n_ / 2;
  double sum = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    sum += exp2_[level];
    if (rng.bounded32(ups + downs) < ups) {
      ++level;
      --ups;
    } else {
      --level;
      --downs;
    }
  }
  return epsilon_ * epsilon_ * sum;
}

double WalkBridgeSampler::sample_b(Philox4x64& rng, double* functional) {
  auto ups = static_cast<std::uint32_t>(n_ / 2);
  auto downs = ups;
  std::size_t level = n_ / 2;
  std::size_t lo = level;
  std::size_t hi = level;
  for (std::size_t k = 0; k < n_; ++k) {
    y_sums_[level] += rng.sign();
    ++departures_[level];
    if (rng.bounded32(ups + downs) < ups) {
      ++level;
      --ups;
    } else {
      --level;
      --downs;
    }
    lo = std::min(lo, level);
    hi = std::max(hi, level);
  }
  CompensatedSum b;
  double a_tilde = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (y_sums_[i] != 0) {
      b.add(static_cast<double>(y_sums_[i]) * exp1_[i]);
    }
    a_tilde += static_cast<double>(departures_[i]) * exp2_[i];
    y_sums_[i] = 0;
    departures_[i] = 0;
  }
  if (functional != nullptr) {
    *functional = epsilon_ * epsilon_ * a_tilde;
  }
  return epsilon_ * b.value();
}

double walk_bridge_functional(double t, std::size_t n, std::uint64_t seed) {
  WalkBridgeSampler sampler(t, n);
  Philox4x64 rng(seed, 0);
  return sampler.sample(rng);
}

BridgeExtremes bridge_extremes(std::size_t n, Philox4x64& rng, std::vector<int>& steps) {
  bridge_steps(n, rng, steps);
  BridgeExtremes out;
  long s = 0;
  for (int step : steps) {
    s += step;
    out.max = std::max(out.max, s);
    out.neg_min = std::max(out.neg_min, -s);
  }
  return out;
}

}  // namespace affwalk
