#include "affwalk/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace affwalk {

namespace {

void require_even_horizon(unsigned n2, const char* who) {
  if (n2 == 0 || n2 % 2 != 0) {
    throw std::invalid_argument(std::string(who) + ": horizon must be even and positive");
  }
}

Rational binomial_over_pow2(long top, long k, long exponent) {
  Rational q(binomial(top, k), pow2(static_cast<unsigned long>(exponent)));
  q.canonicalize();
  return q;
}

Rational local_time_pmf_positive(unsigned n, long a, long k) {
  const long two_n = 2L * n;
  if (a == 0) {
    return binomial_over_pow2(two_n - k, n, two_n - k);
  }
  if (a % 2 == 0) {
    return binomial_over_pow2(two_n - k + 1, (two_n + a) / 2, two_n - k + 1);
  }
  return binomial_over_pow2(two_n - k, (two_n + a - 1) / 2, two_n - k);
}

// Central binomials C(2j, j) for the per-level weights of the enumeration.
std::vector<std::uint64_t> central_binomials(unsigned max_d) {
  std::vector<std::uint64_t> c(max_d + 1, 0);
  for (unsigned d = 0; d <= max_d; d += 2) {
    c[d] = binomial(d, d / 2).get_ui();
  }
  return c;
}

// C(D, D/2) / 2^D for even D, built by the ratio recurrence.
std::vector<double> level_weights(unsigned max_d) {
  std::vector<double> w(max_d + 1, 0.0);
  w[0] = 1.0;
  for (unsigned d = 2; d <= max_d; d += 2) {
    w[d] = w[d - 2] * static_cast<double>(d - 1) / static_cast<double>(d);
  }
  return w;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) {
    s += x;
  }
  return s / static_cast<double>(v.size());
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

Rational local_time_pmf(unsigned n, long a, long k) {
  const long two_n = 2L * n;
  a = std::abs(a);
  if (k < 0 || k > two_n) {
    return Rational(0);
  }
  if (a > two_n) {
    return Rational(k == 0 ? 1 : 0);
  }
  if (a != 0 && k == 0) {
    Rational rest(0);
    for (long j = 1; j <= two_n; ++j) {
      rest += local_time_pmf_positive(n, a, j);
    }
    return Rational(1) - rest;
  }
  return local_time_pmf_positive(n, a, k);
}

std::map<std::pair<long, long>, std::uint64_t> local_time_enumeration(unsigned n) {
  if (n > 12) {
    throw std::invalid_argument("local_time_enumeration: horizon too large for brute force");
  }
  const long two_n = 2L * n;
  std::map<std::pair<long, long>, std::uint64_t> counts;
  std::vector<long> visits(static_cast<std::size_t>(2 * two_n + 1));
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << two_n); ++code) {
    std::fill(visits.begin(), visits.end(), 0);
    long s = 0;
    for (long j = 0; j < two_n; ++j) {
      s += ((code >> j) & 1U) != 0 ? 1 : -1;
      ++visits[static_cast<std::size_t>(s + two_n)];
    }
    for (long a = -two_n; a <= two_n; ++a) {
      ++counts[{a, visits[static_cast<std::size_t>(a + two_n)]}];
    }
  }
  return counts;
}

std::string to_string(ReturnMethod m) {
  switch (m) {
    case ReturnMethod::enumeration:
      return "enumeration";
    case ReturnMethod::edge_dp:
      return "edge_dp";
    case ReturnMethod::rao_blackwell:
      return "rao_blackwell";
    case ReturnMethod::naive:
      return "naive";
  }
  return "unknown";
}

double ReturnProbability::value() const {
  if (exact) {
    return to_double(*exact);
  }
  if (estimate) {
    return estimate->estimate;
  }
  throw std::logic_error("ReturnProbability: no value");
}

Rational exact_return_prob(unsigned n2, unsigned cap, unsigned workers) {
  require_even_horizon(n2, "exact_return_prob");
  if (n2 > cap) {
    std::ostringstream msg;
    msg << "exact_return_prob: 2n = " << n2 << " exceeds the enumeration cap " << cap
        << "; use rb_return_estimator (or exact_return_prob_dp)";
    throw std::invalid_argument(msg.str());
  }
  if (n2 > 30) {
    throw std::invalid_argument("exact_return_prob: enumeration limited to 2n <= 30");
  }
  const unsigned prefix = std::min(6u, n2 / 2);
  const unsigned rest = n2 - prefix;
  const auto central = central_binomials(n2);
  const long off = n2;

  auto batch = [&](std::size_t b) -> std::uint64_t {
    std::vector<int> steps(n2, 1);
    for (unsigned i = 0; i < prefix; ++i) {
      steps[i] = ((b >> i) & 1U) != 0 ? -1 : 1;
    }
    std::vector<long> s(n2 + 1, 0);
    for (unsigned k = 0; k < n2; ++k) {
      s[k + 1] = s[k] + steps[k];
    }
    std::vector<unsigned> dep(2 * n2 + 1, 0);
    long odd = 0;
    auto bump = [&](long level, int by) {
      auto& d = dep[static_cast<std::size_t>(level + off)];
      d = static_cast<unsigned>(static_cast<int>(d) + by);
      odd += (d % 2 == 1) ? 1 : -1;
    };
    for (unsigned k = 0; k < n2; ++k) {
      bump(s[k], 1);
    }
    std::uint64_t total = 0;
    auto score = [&] {
      if (s[n2] != 0 || odd != 0) {
        return;
      }
      std::uint64_t prod = 1;
      for (std::size_t i = 0; i < dep.size(); ++i) {
        prod *= central[dep[i]];
      }
      total += prod;
    };
    score();
    const std::uint64_t codes = std::uint64_t{1} << rest;
    for (std::uint64_t i = 1; i < codes; ++i) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(i));
      const unsigned j = n2 - 1 - bit;
      const int delta = -2 * steps[j];
      steps[j] = -steps[j];
      for (unsigned k = j + 1; k < n2; ++k) {
        bump(s[k], -1);
        s[k] += delta;
        bump(s[k], 1);
      }
      s[n2] += delta;
      score();
    }
    return total;
  };
  const auto parts =
      run_batches<std::uint64_t>(std::size_t{1} << prefix, workers, batch);
  Integer sum(0);
  for (auto p : parts) {
    sum += Integer(static_cast<unsigned long>(p));
  }
  Rational out(sum, pow2(2UL * n2));
  out.canonicalize();
  return out;
}

Rational exact_return_prob_dp(unsigned n2) {
  require_even_horizon(n2, "exact_return_prob_dp");
  const unsigned n = n2 / 2;  // total up-crossings over all edges
  BinomialTable c(2 * n + 1);
  auto central = [&](unsigned d) -> Integer {
    return d % 2 == 0 ? c(d, d / 2) : Integer(0);
  };
  // g[p][m]: weighted count of the part of the walk beyond an edge crossed p
  // times upward, using m further up-crossings. g[0][m] = [m == 0].
  std::vector<std::vector<Integer>> g(n + 1, std::vector<Integer>(n + 1, 0));
  g[0][0] = 1;
  for (unsigned m = 0; m <= n; ++m) {
    for (unsigned p = 1; p + m <= n; ++p) {
      Integer acc(0);
      for (unsigned e = 0; e <= m; ++e) {
        const Integer& tail = g[e][m - e];
        if (tail == 0) {
          continue;
        }
        const Integer w = central(e + p);
        if (w == 0) {
          continue;
        }
        acc += c(e + p - 1, e) * w * tail;
      }
      g[p][m] = acc;
    }
  }
  Integer sum(0);
  for (unsigned e0 = 0; e0 <= n; ++e0) {
    for (unsigned em = 0; e0 + em <= n; ++em) {
      const unsigned d = e0 + em;
      const Integer w = central(d);
      if (w == 0) {
        continue;
      }
      const unsigned rest = n - d;
      Integer inner(0);
      for (unsigned mp = 0; mp <= rest; ++mp) {
        inner += g[e0][mp] * g[em][rest - mp];
      }
      if (inner != 0) {
        sum += c(d, e0) * w * inner;
      }
    }
  }
  Rational out(sum, pow2(4UL * n));
  out.canonicalize();
  return out;
}

EstimateWithError rb_return_estimator(unsigned n2, std::uint64_t samples, std::uint64_t seed,
                                      const ParallelOptions& opts) {
  require_even_horizon(n2, "rb_return_estimator");
  if (samples == 0) {
    throw std::invalid_argument("rb_return_estimator: zero samples");
  }
  const auto weights = level_weights(n2);
  struct Sampler {
    unsigned n2;
    const std::vector<double>* w;
    std::vector<unsigned> dep;
    double operator()(Philox4x64& rng) {
      const long off = n2;
      long s = 0;
      long lo = 0;
      long hi = 0;
      for (unsigned k = 0; k < n2; ++k) {
        ++dep[static_cast<std::size_t>(s + off)];
        s += rng.sign();
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      double value = s == 0 ? 1.0 : 0.0;
      for (long a = lo; a <= hi; ++a) {
        auto& d = dep[static_cast<std::size_t>(a + off)];
        value *= (*w)[d];  // zero for odd counts
        d = 0;
      }
      return value;
    }
  };
  return monte_carlo_mean(samples, seed, Sampler{n2, &weights, std::vector<unsigned>(2 * n2 + 1)},
                          opts);
}

EstimateWithError naive_return_estimator(unsigned n2, std::uint64_t samples, std::uint64_t seed,
                                         const ParallelOptions& opts) {
  require_even_horizon(n2, "naive_return_estimator");
  if (samples == 0) {
    throw std::invalid_argument("naive_return_estimator: zero samples");
  }
  struct Sampler {
    unsigned n2;
    std::vector<long> ysum;
    double operator()(Philox4x64& rng) {
      const long off = n2;
      long s = 0;
      long lo = 0;
      long hi = 0;
      for (unsigned k = 0; k < n2; ++k) {
        ysum[static_cast<std::size_t>(s + off)] += rng.sign();
        s += rng.sign();
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      bool hit = s == 0;
      for (long a = lo; a <= hi; ++a) {
        auto& y = ysum[static_cast<std::size_t>(a + off)];
        hit = hit && y == 0;
        y = 0;
      }
      return hit ? 1.0 : 0.0;
    }
  };
  return monte_carlo_mean(samples, seed, Sampler{n2, std::vector<long>(2 * n2 + 1)}, opts);
}

double decay_scale(double n) { return std::cbrt(n) * std::pow(std::log(n), 2.0 / 3.0); }

DecayFit fit_decay_log(const std::vector<std::pair<double, double>>& neg_logs) {
  if (neg_logs.size() < 4) {
    throw std::invalid_argument("fit_decay: at least four points are required");
  }
  DecayFit fit;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [n, neg_log] : neg_logs) {
    if (!(n >= 2.0)) {
      throw std::invalid_argument("fit_decay: n must be at least 2");
    }
    if (!fit.n.empty() && !(n > fit.n.back())) {
      throw std::invalid_argument("fit_decay: n-grid must be strictly increasing");
    }
    if (!(neg_log > 0.0) || !std::isfinite(neg_log)) {
      throw std::invalid_argument("fit_decay: return probabilities must lie in (0, 1)");
    }
    const double x = decay_scale(n);
    fit.n.push_back(n);
    fit.neg_log_pi.push_back(neg_log);
    fit.normalized.push_back(neg_log / x);
    sxy += x * neg_log;
    sxx += x * x;
  }
  fit.c = sxy / sxx;
  const auto [lo, hi] = std::minmax_element(fit.normalized.begin(), fit.normalized.end());
  fit.band_min = *lo;
  fit.band_max = *hi;
  fit.band_ratio = fit.band_max / fit.band_min;
  const std::size_t start = fit.n.size() / 2;
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = start; i < fit.n.size(); ++i) {
    lx.push_back(std::log(fit.n[i]));
    ly.push_back(std::log(fit.normalized[i]));
  }
  fit.tail_slope = ols_slope(lx, ly);
  return fit;
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& probs) {
  std::vector<std::pair<double, double>> logs;
  logs.reserve(probs.size());
  for (const auto& [n, p] : probs) {
    if (!(p > 0.0) || !(p < 1.0)) {
      throw std::invalid_argument("fit_decay: return probabilities must lie in (0, 1)");
    }
    logs.emplace_back(n, -std::log(p));
  }
  return fit_decay_log(logs);
}

long tube_halfwidth(unsigned n) {
  if (n < 2) {
    throw std::invalid_argument("tube_halfwidth: n must be at least 2");
  }
  const double ln = std::log(static_cast<double>(n));
  const double m = decay_scale(n) / std::numbers::ln2;
  return static_cast<long>(std::floor(m / ln));
}

TubeResult tube_probability(unsigned n, long halfwidth, std::uint64_t seed, std::uint64_t samples,
                            const ParallelOptions& opts) {
  if (halfwidth < 1) {
    throw std::invalid_argument("tube_probability: halfwidth must be at least 1");
  }
  TubeResult out;
  out.n = n;
  out.halfwidth = halfwidth;
  const long steps = 2L * n;
  const long h = std::min(halfwidth, steps);
  const auto width = static_cast<std::size_t>(2 * h + 1);
  if (steps <= static_cast<long>(kTubeRationalCap)) {
    std::vector<Integer> cur(width, 0);
    std::vector<Integer> next(width, 0);
    cur[static_cast<std::size_t>(h)] = 1;
    for (long k = 0; k < steps; ++k) {
      for (std::size_t i = 0; i < width; ++i) {
        next[i] = 0;
        if (i > 0) {
          next[i] += cur[i - 1];
        }
        if (i + 1 < width) {
          next[i] += cur[i + 1];
        }
      }
      std::swap(cur, next);
    }
    Integer total(0);
    for (const auto& v : cur) {
      total += v;
    }
    Rational q(total, pow2(static_cast<unsigned long>(steps)));
    q.canonicalize();
    out.exact_rational = q;
    out.exact = to_double(q);
  } else {
    std::vector<double> cur(width, 0.0);
    std::vector<double> next(width, 0.0);
    cur[static_cast<std::size_t>(h)] = 1.0;
    for (long k = 0; k < steps; ++k) {
      for (std::size_t i = 0; i < width; ++i) {
        next[i] = 0.5 * ((i > 0 ? cur[i - 1] : 0.0) + (i + 1 < width ? cur[i + 1] : 0.0));
      }
      std::swap(cur, next);
    }
    double total = 0.0;
    for (double v : cur) {
      total += v;
    }
    out.exact = total;
  }
  if (samples > 0) {
    auto sampler = [steps, halfwidth](Philox4x64& rng) {
      long s = 0;
      for (long k = 0; k < steps; ++k) {
        s += rng.sign();
        if (std::abs(s) > halfwidth) {
          return 0.0;
        }
      }
      return 1.0;
    };
    out.estimate = monte_carlo_mean(samples, seed, sampler, opts);
  }
  return out;
}

}  // namespace affwalk
