#include "doctest.h"

#include <cmath>
#include <numbers>

#include "affwalk/toy_model.hpp"

using namespace affwalk;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ToyModel simple() { return ToyModel({1.0}, {Rational(0), Rational(1)}); }
ToyModel lazy_free() { return ToyModel({1.0, kSqrt2}, {Rational(0), Rational(1, 2), Rational(1, 2)}); }
ToyModel lazy() {
  return ToyModel({1.0, kSqrt2}, {parse_rational("0.2"), parse_rational("0.4"), parse_rational("0.4")});
}

Integer factorial(long n) {
  Integer f = 1;
  for (long i = 2; i <= n; ++i) {
    f *= i;
  }
  return f;
}

Rational power(const Rational& q, long k) {
  Rational r = 1;
  for (long i = 0; i < k; ++i) {
    r *= q;
  }
  return r;
}

// P[X_n = d] for N = 2 as a multinomial sum over the numbers of stays and of
// +-steps on each axis.
Rational multinomial_point(long n, long d1, long d2, const ToyModel& m) {
  const auto& p = m.p();
  Rational total = 0;
  for (long k1 = std::abs(d1); k1 <= n; k1 += 2) {
    for (long k2 = std::abs(d2); k1 + k2 <= n; k2 += 2) {
      const long k0 = n - k1 - k2;
      const long u1 = (k1 + d1) / 2;
      const long u2 = (k2 + d2) / 2;
      if (k0 > 0 && p[0] == 0) {
        continue;
      }
      const Integer coeff = factorial(n) / (factorial(k0) * factorial(u1) * factorial(k1 - u1) *
                                            factorial(u2) * factorial(k2 - u2));
      total += Rational(coeff) * power(p[0], k0) * power(p[1] / 2, k1) * power(p[2] / 2, k2);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("model validation") {
  CHECK_NOTHROW(simple());
  CHECK(lazy().sigma2() == doctest::Approx(0.4 + 0.4 * 2.0));
  CHECK(lazy_free().return_constant() == doctest::Approx(1.0 / std::numbers::pi));
  CHECK_THROWS_AS(ToyModel({1.0}, {Rational(1, 2), Rational(1, 3)}), std::invalid_argument);
  CHECK_THROWS_AS(ToyModel({1.0}, {Rational(1), Rational(0)}), std::invalid_argument);
  CHECK_THROWS_AS(ToyModel({-1.0}, {Rational(0), Rational(1)}), std::invalid_argument);
  CHECK_THROWS_AS(ToyModel({1.0, 2.0}, {Rational(0), Rational(1)}), std::invalid_argument);
  CHECK_THROWS_AS(ToyModel({}, {Rational(1)}), std::invalid_argument);
  CHECK(lazy().characteristic({0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(lazy().characteristic({std::numbers::pi, 0.0}) == doctest::Approx(0.2 - 0.4 + 0.4));
}

TEST_CASE("exact return probabilities") {
  CHECK(toy_exact_return(2, simple()) == Rational(1, 2));
  CHECK(toy_exact_return(1, simple()) == 0);
  CHECK(toy_exact_return(4, simple()) == Rational(3, 8));
  CHECK(toy_exact_return(2, lazy_free()) == Rational(1, 4));
  for (std::size_t n : {1, 3, 5, 9, 17}) {
    CHECK(toy_exact_return(n, lazy_free()) == 0);
  }
  CHECK(toy_exact_return(3, lazy()) > 0);
}

TEST_CASE("distribution is a probability law") {
  const ToyDistribution dist(lazy(), 10);
  Integer total = 0;
  dist.for_each([&](const std::vector<long>&, const Integer& w) { total += w; });
  CHECK(total == dist.denominator());
  CHECK(dist.probability({11, 0}) == 0);
  CHECK_THROWS_AS((void)dist.probability({1}), std::invalid_argument);
}

TEST_CASE("point probabilities equal the multinomial oracle") {
  for (const auto& m : {lazy(), lazy_free()}) {
    for (long n : {6L, 11L, 14L}) {
      for (long d1 = -4; d1 <= 4; ++d1) {
        for (long d2 = -3; d2 <= 3; ++d2) {
          const auto p = toy_point_prob(static_cast<std::size_t>(n), {d1, d2}, m);
          CHECK(p.exact == multinomial_point(n, d1, d2, m));
        }
      }
    }
  }
}

TEST_CASE("point probability consistency") {
  const auto m = lazy();
  CHECK(toy_point_prob(20, {0, 0}, m).exact == toy_exact_return(20, m));
  const auto parity = toy_point_prob(20, {2, 1}, lazy_free());
  CHECK(parity.exact == 0);
  CHECK(parity.comparator > 0.0);
  const auto far = toy_point_prob(4, {9, 0}, m);
  CHECK(far.exact == 0);
}

TEST_CASE("deviation ratio at n = 400") {
  const auto p = toy_point_prob(400, {4, -2}, lazy());
  CHECK(p.ratio >= 0.9);
  CHECK(p.ratio <= 1.1);
  const double expected = 1.0 / (2.0 * std::numbers::pi * 0.4 * 400.0) *
                          std::exp(-16.0 / (2.0 * 0.4 * 400.0)) * std::exp(-4.0 / (2.0 * 0.4 * 400.0));
  CHECK(p.comparator == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("Fourier inversion agrees with the exact law") {
  const ToyModel three({1.0, kSqrt2, std::sqrt(3.0)},
                       {Rational(1, 10), Rational(3, 10), Rational(3, 10), Rational(3, 10)});
  double worst = 0.0;
  for (const auto& m : {simple(), lazy_free(), lazy(), three}) {
    for (std::size_t n : {1, 2, 5, 16, 40, 64}) {
      const auto f = toy_fourier_return(n, m);
      CHECK(f.converged);
      worst = std::max(worst, std::abs(f.value - to_double(toy_exact_return(n, m))));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK_THROWS_AS(toy_fourier_return(0, simple()), std::invalid_argument);
}

TEST_CASE("return probability asymptotics at n = 10^4") {
  const auto a = toy_fourier_return(10000, lazy_free());
  CHECK(a.value * 1e4 / (2.0 * lazy_free().return_constant()) == doctest::Approx(1.0).epsilon(0.05));
  const auto b = toy_fourier_return(10000, lazy());
  CHECK(b.value * 1e4 / lazy().return_constant() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("window probabilities") {
  const auto m = lazy();
  const ToyDistribution dist(m, 40);
  const auto all = toy_window_prob(dist, 1000.0, m);
  CHECK(all.exact == 1);
  Rational previous = 0;
  for (double w : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const auto r = toy_window_prob(dist, w, m);
    CHECK(r.exact >= previous);
    previous = r.exact;
  }
  CHECK(toy_window_prob(dist, 1e-9, m).exact == toy_exact_return(40, m));
  CHECK_THROWS_AS(toy_window_prob(dist, 0.0, m), std::invalid_argument);
  CHECK_FALSE(toy_window_prob(5, 2.0, lazy_free()).comparator_specified);
}

TEST_CASE("window ratio at n = 200") {
  const auto r = toy_window_prob(200, std::pow(200.0, 0.3), lazy());
  CHECK(r.comparator_specified);
  CHECK(std::abs(r.ratio - 1.0) <= 0.10);
}

TEST_CASE("Weyl averages") {
  const std::vector<double> alpha{1.0, kSqrt2};
  const auto ones = weyl_average(alpha, 1.0, [](double) { return 1.0; }, 10);
  CHECK(ones.average == doctest::Approx(1.0));
  CHECK(ones.points == 21 * 21);
  const auto c = weyl_average(
      alpha, 1.0, [](double x) { return std::cos(2.0 * std::numbers::pi * x); }, 60);
  CHECK(std::abs(c.average) <= 0.05);
  CHECK(c.comparator == doctest::Approx(0.0).scale(1.0));
  CHECK(weyl_diagnostic(alpha, 1.0, 60).equidistributed);
  const auto rational = weyl_diagnostic({1.0, 0.5}, 1.0, 60);
  CHECK_FALSE(rational.equidistributed);
  CHECK(rational.max_harmonic > 0.5);
}
