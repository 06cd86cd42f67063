#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "affwalk/estimate.hpp"
#include "affwalk/group.hpp"
#include "affwalk/parallel.hpp"
#include "affwalk/walk.hpp"

using namespace affwalk;

namespace {

double chi_square_pvalue(const std::map<long, double>& observed,
                         const std::map<long, double>& probs, double total) {
  double chi2 = 0.0;
  for (const auto& [k, p] : probs) {
    const double expected = p * total;
    const auto it = observed.find(k);
    const double o = it == observed.end() ? 0.0 : it->second;
    chi2 += (o - expected) * (o - expected) / expected;
  }
  const boost::math::chi_squared dist(static_cast<double>(probs.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

}  // namespace

TEST_CASE("one and two step formulas") {
  const double eps = 0.3;
  const auto one = build_walk(eps, {1.0}, {1.0});
  CHECK(one.a(1) == doctest::Approx(std::exp(eps)));
  CHECK(one.b(1) == doctest::Approx(eps));

  const auto two = build_walk(eps, {1.0, -1.0}, {1.0, -1.0});
  CHECK(two.a(2) == 1.0);
  CHECK(two.b(2) == doctest::Approx(eps * (1.0 - std::exp(eps))));
  CHECK_THROWS_AS(build_walk(0.0, {1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_walk(eps, {1.0}, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("path follows the group recursion") {
  const double eps = 0.05;
  const auto path = simulate_walk(500, eps, {InnovationKind::gaussian, InnovationKind::gaussian}, 3);
  GroupElement x;
  for (std::size_t k = 0; k < path.n; ++k) {
    const double step_x = path.s[k + 1] - path.s[k];
    x = compose(x, GroupElement(std::exp(eps * step_x), eps * path.y[k]));
    CHECK(x.a() == doctest::Approx(path.a(k + 1)).epsilon(1e-10));
    CHECK(x.b() == doctest::Approx(path.b(k + 1)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("simulate_walk is reproducible") {
  const InnovationSpec spec;
  const auto p = simulate_walk(100, 0.1, spec, 8);
  const auto q = simulate_walk(100, 0.1, spec, 8);
  CHECK(p.s == q.s);
  CHECK(p.b_terms == q.b_terms);
  CHECK(simulate_walk(100, 0.1, spec, 9).s != p.s);
}

TEST_CASE("S_n / sqrt(n) is centred") {
  const std::size_t n = 10000;
  const auto m = monte_carlo_mean(
      100000, 17,
      [n](Philox4x64& rng) {
        long s = 0;
        for (std::size_t k = 0; k < n; ++k) {
          s += rng.sign();
        }
        return static_cast<double>(s) / std::sqrt(static_cast<double>(n));
      });
  CHECK(std::abs(m.estimate) <= 3.0 / std::sqrt(1e5));
}

TEST_CASE("bridge of length 2 picks each path half the time") {
  Philox4x64 rng(5, 0);
  std::vector<int> steps;
  int up_first = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    bridge_steps(2, rng, steps);
    REQUIRE(steps[0] + steps[1] == 0);
    up_first += steps[0] == 1 ? 1 : 0;
  }
  CHECK(std::abs(up_first / double(draws) - 0.5) <= 3.0 * 0.5 / std::sqrt(double(draws)));
  CHECK_THROWS_AS(bridge_steps(3, rng, steps), std::invalid_argument);
}

TEST_CASE("bridge first step is fair for every even n") {
  Philox4x64 rng(6, 0);
  std::vector<int> steps;
  for (std::size_t n : {4, 10, 64}) {
    int up = 0;
    for (int i = 0; i < 40000; ++i) {
      bridge_steps(n, rng, steps);
      up += steps[0] == 1 ? 1 : 0;
    }
    CHECK(std::abs(up / 40000.0 - 0.5) <= 3.0 * 0.5 / std::sqrt(40000.0));
  }
}

TEST_CASE("bridge maximum law matches enumeration of the 70 bridges of length 8") {
  std::map<long, double> probs;
  std::map<long, double> neg_probs;
  int bridges = 0;
  for (unsigned mask = 0; mask < 256; ++mask) {
    if (__builtin_popcount(mask) != 4) {
      continue;
    }
    long s = 0;
    long hi = 0;
    long lo = 0;
    for (int j = 0; j < 8; ++j) {
      s += (mask >> j) & 1U ? 1 : -1;
      hi = std::max(hi, s);
      lo = std::min(lo, s);
    }
    probs[hi] += 1.0;
    neg_probs[-lo] += 1.0;
    ++bridges;
  }
  REQUIRE(bridges == 70);
  for (auto& [k, p] : probs) {
    p /= 70.0;
  }
  for (auto& [k, p] : neg_probs) {
    p /= 70.0;
  }
  Philox4x64 rng(7, 0);
  std::vector<int> steps;
  std::map<long, double> observed;
  std::map<long, double> neg_observed;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto e = bridge_extremes(8, rng, steps);
    observed[e.max] += 1.0;
    neg_observed[e.neg_min] += 1.0;
  }
  CHECK(chi_square_pvalue(observed, probs, draws) > 1e-4);
  CHECK(chi_square_pvalue(neg_observed, neg_probs, draws) > 1e-4);
}

TEST_CASE("local time of a two-step path") {
  const auto path = build_walk(0.1, {1.0, -1.0}, {1.0, 1.0});
  const auto prof = local_time_profile(path);
  CHECK(prof.visits_at(0) == 1);
  CHECK(prof.visits_at(1) == 1);
  CHECK(prof.visits_at(-1) == 0);
  CHECK(prof.departures_from(0) == 1);
  CHECK(prof.departures_from(1) == 1);
  CHECK(prof.visits_at(17) == 0);
}

TEST_CASE("local times sum to n and the occupation formula reconstructs b_n") {
  Philox4x64 seeds(9, 0);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + seeds.bounded(300);
    const double eps = 0.01 + 0.5 * seeds.uniform();
    const auto path =
        simulate_walk(n, eps, {InnovationKind::bernoulli, InnovationKind::gaussian}, seeds());
    const auto prof = local_time_profile(path);
    REQUIRE(prof.total_visits() == n);
    CHECK(occupation_b(prof, eps) ==
          doctest::Approx(path.b(n)).epsilon(1e-10).scale(eps * std::sqrt(double(n))));
  }
  const auto gaussian = simulate_walk(10, 0.1, {InnovationKind::gaussian, InnovationKind::gaussian}, 1);
  CHECK_THROWS_AS(local_time_profile(gaussian), std::invalid_argument);
}

TEST_CASE("Donsker scale") {
  CHECK(donsker_scale(1.0, 0.1) == 100);
  CHECK(donsker_scale(1.0, 1.0) == 1);
  CHECK(donsker_scale(0.5, 0.1) == 50);
  CHECK(donsker_scale(1.0, 0.3) == 11);
}

TEST_CASE("bridge functional small-time limit and pointwise bound") {
  const auto f = sample_bridge_functional(1e-6, 2048, std::uint64_t{3});
  CHECK(f.value / 1e-6 == doctest::Approx(1.0).epsilon(1e-3));
  Philox4x64 rng(4, 0);
  std::vector<double> scratch;
  for (int i = 0; i < 2000; ++i) {
    const double t = 0.5 + 8.0 * rng.uniform();
    const auto s = sample_bridge_functional(t, 512, rng, scratch);
    CHECK(s.value >= t * std::exp(2.0 * std::sqrt(t) * s.min) * (1.0 - 1e-12));
    CHECK(s.value <= t * std::exp(2.0 * std::sqrt(t) * s.max) * (1.0 + 1e-12));
    CHECK(s.min <= 0.0);
    CHECK(s.max >= 0.0);
  }
}

TEST_CASE("mean of the bridge functional at t = 1") {
  // E exp(2 b_u) = exp(2 u (1 - u)).
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [](double u) { return std::exp(2.0 * u * (1.0 - u)); }, 0.0, 1.0);
  CHECK(oracle == doctest::Approx(1.4106861346).epsilon(1e-9));
  std::vector<double> scratch;
  const auto m = monte_carlo_mean(100000, 11, [&scratch](Philox4x64& rng) {
    return sample_bridge_functional(1.0, 2048, rng, scratch).value;
  });
  CHECK(std::abs(m.estimate - oracle) <= 3.0 * m.std_error);
}

TEST_CASE("left and trapezoid grids agree") {
  Philox4x64 a(12, 0);
  Philox4x64 b(12, 0);
  std::vector<double> s1;
  std::vector<double> s2;
  for (int i = 0; i < 100; ++i) {
    const auto l = bridge_exp_integral(1.5, 256, a, s1, GridRule::left);
    const auto t = bridge_exp_integral(1.5, 256, b, s2, GridRule::trapezoid);
    CHECK(l.integral == doctest::Approx(t.integral).epsilon(1e-14));
  }
}

TEST_CASE("walk bridge functional of length 2") {
  const double t = 3.0;
  WalkBridgeSampler sampler(t, 2);
  const double up = 0.5 * t * (1.0 + std::exp(2.0 * std::sqrt(t / 2.0)));
  const double down = 0.5 * t * (1.0 + std::exp(-2.0 * std::sqrt(t / 2.0)));
  Philox4x64 rng(13, 0);
  int ups = 0;
  for (int i = 0; i < 10000; ++i) {
    const double v = sampler.sample(rng);
    const bool is_up = std::abs(v - up) < 1e-12 * up;
    const bool is_down = std::abs(v - down) < 1e-12 * up;
    REQUIRE((is_up || is_down));
    ups += is_up ? 1 : 0;
  }
  CHECK(std::abs(ups / 1e4 - 0.5) <= 3.0 * 0.005);
}

TEST_CASE("inverse walk bridge functional at t = 4") {
  WalkBridgeSampler proto(4.0, 2048);
  const auto m = monte_carlo_mean(20000, 14, [proto](Philox4x64& rng) mutable {
    const double a = proto.sample(rng);
    REQUIRE(a > 0.0);
    return 1.0 / a;
  });
  CHECK(m.estimate == doctest::Approx(0.25).epsilon(0.2));
}

TEST_CASE("sample_b returns the functional of the same path") {
  WalkBridgeSampler s(2.0, 64);
  Philox4x64 rng(15, 0);
  RunningMoments b;
  for (int i = 0; i < 20000; ++i) {
    double functional = 0.0;
    b.add(s.sample_b(rng, &functional));
    REQUIRE(functional > 0.0);
  }
  CHECK(std::abs(b.mean()) <= 4.0 * b.std_error());
}
