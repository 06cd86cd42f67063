#include "doctest.h"

#include <cmath>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "affwalk/estimate.hpp"
#include "affwalk/parallel.hpp"
#include "affwalk/rational.hpp"
#include "affwalk/rng.hpp"

using namespace affwalk;

TEST_CASE("rational arithmetic is exact and associative") {
  const Rational a(1, 3);
  const Rational b(2, 7);
  const Rational c = parse_rational("-5/11");
  CHECK((a + b) + c == a + (b + c));
  CHECK((a * b) * c == a * (b * c));
  CHECK(a * (b + c) == a * b + a * c);
  CHECK(make_rational(6, -4) == Rational(-3, 2));
  CHECK(make_rational(6, -4).get_den() > 0);
  CHECK_THROWS_AS(make_rational(1, 0), std::domain_error);
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("2/5") == Rational(2, 5));
  CHECK(parse_rational("0.4") == Rational(2, 5));
  CHECK(parse_rational("0.2") == Rational(1, 5));
  CHECK(parse_rational("-1.25") == Rational(-5, 4));
  CHECK(parse_rational("3") == Rational(3));
  CHECK(parse_rational("4/8") == Rational(1, 2));
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("0.2.1"), std::invalid_argument);
}

TEST_CASE("to_double rounds to nearest") {
  CHECK(to_double(Rational(1, 5)) == 0.2);
  CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
  CHECK(to_double(Rational(-2, 3)) == -2.0 / 3.0);
  CHECK(to_double(Rational(7, 10)) == 0.7);
  CHECK(to_double(Rational(0)) == 0.0);
}

TEST_CASE("log_of survives values below double range") {
  const Rational tiny(Integer(1), pow2(5000));
  CHECK(to_double(tiny) == 0.0);
  CHECK(log_of(tiny) == doctest::Approx(-5000.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(log_of(Rational(3, 7)) == doctest::Approx(std::log(3.0 / 7.0)).epsilon(1e-15));
  CHECK_THROWS_AS(log_of(Rational(0)), std::domain_error);
}

TEST_CASE("binomials") {
  CHECK(binomial(10, 5) == 252);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(5, 6) == 0);
  const BinomialTable t(60);
  CHECK(t(60, 30) == binomial(60, 30));
  CHECK(t(60, 30).get_str() == "118264581564861424");
  CHECK(t(3, 7) == 0);
}

TEST_CASE("Philox4x64-10 known answers") {
  using B = Philox4x64::Block;
  const auto zero = Philox4x64::block(B{0, 0, 0, 0}, {0, 0});
  CHECK(zero == B{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL,
                  0x7e68b68aec7ba23bULL});
  const auto digits = Philox4x64::block(
      B{0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL,
        0x082efa98ec4e6c89ULL},
      {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL});
  CHECK(digits == B{0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL, 0xa5a1610e72fd18b5ULL,
                    0x57bd43b5e52b7fe6ULL});
}

TEST_CASE("stream outputs follow the numpy Philox counter convention") {
  Philox4x64 rng(1, 2);
  const std::uint64_t expected[] = {0x4f2f4313b5536b09ULL, 0x5b617be3219ff32aULL,
                                    0x097293476f9275cbULL, 0xf63f3bf4962c3942ULL,
                                    0x04dcc60473aa0f43ULL, 0x6d905c9b986b0028ULL,
                                    0x559a6c953d16fe9dULL, 0xbd24fd1da9945eeaULL};
  for (auto v : expected) {
    CHECK(rng() == v);
  }
  Philox4x64 other(7, 0);
  CHECK(other() == 0xdf4034b829e9fba4ULL);
}

TEST_CASE("streams are distinct and reproducible") {
  Philox4x64 a(5, 0);
  Philox4x64 b(5, 1);
  Philox4x64 c(5, 0);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == c());
    seen.insert(x);
    seen.insert(b());
  }
  CHECK(seen.size() == 200);
}

TEST_CASE("bounded32 is uniform") {
  Philox4x64 rng(3, 0);
  const std::uint32_t k = 7;
  std::vector<double> counts(k, 0.0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const auto v = rng.bounded32(k);
    REQUIRE(v < k);
    counts[v] += 1.0;
  }
  double chi2 = 0.0;
  for (double c : counts) {
    chi2 += (c - draws / 7.0) * (c - draws / 7.0) / (draws / 7.0);
  }
  const boost::math::chi_squared dist(k - 1);
  CHECK(boost::math::cdf(boost::math::complement(dist, chi2)) > 1e-4);
  CHECK(rng.bounded(1) == 0);
}

TEST_CASE("uniform, sign and normal moments") {
  Philox4x64 rng(4, 0);
  RunningMoments u;
  RunningMoments s;
  RunningMoments z;
  RunningMoments z4;
  for (int i = 0; i < 200000; ++i) {
    const double x = rng.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    REQUIRE(rng.uniform_open0() > 0.0);
    u.add(x);
    s.add(rng.sign());
    const double g = rng.normal();
    z.add(g);
    z4.add(g * g * g * g);
  }
  CHECK(std::abs(u.mean() - 0.5) < 4.0 * u.std_error());
  CHECK(std::abs(s.mean()) < 4.0 * s.std_error());
  CHECK(std::abs(z.mean()) < 4.0 * z.std_error());
  CHECK(z.variance() == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(z4.mean() - 3.0) < 4.0 * z4.std_error());
}

TEST_CASE("running moments merge and stderr") {
  RunningMoments all;
  RunningMoments left;
  RunningMoments right;
  for (int i = 1; i <= 10; ++i) {
    all.add(i);
    (i <= 4 ? left : right).add(i);
  }
  left.merge(right);
  CHECK(left.count() == 10);
  CHECK(left.mean() == doctest::Approx(5.5));
  CHECK(left.variance() == doctest::Approx(all.variance()));
  CHECK(all.variance() == doctest::Approx(55.0 / 6.0));
  CHECK(all.std_error() == doctest::Approx(std::sqrt(55.0 / 6.0 / 10.0)));
  RunningMoments one;
  one.add(3.0);
  CHECK(one.variance() == 0.0);
}

TEST_CASE("Monte Carlo mean does not depend on the worker count") {
  auto sampler = [](Philox4x64& rng) { return rng.normal() + rng.uniform(); };
  const auto one = monte_carlo_mean(50000, 9, sampler, {1, {}});
  const auto four = monte_carlo_mean(50000, 9, sampler, {4, {}});
  CHECK(one.estimate == four.estimate);
  CHECK(one.std_error == four.std_error);
  CHECK(one.samples == 50000);
  CHECK(one.seed == 9);
  CHECK_THROWS_AS(monte_carlo_mean(0, 9, sampler), std::invalid_argument);
}

TEST_CASE("cancellation stops between batches") {
  std::stop_source src;
  src.request_stop();
  auto sampler = [](Philox4x64& rng) { return rng.uniform(); };
  CHECK_THROWS_AS(monte_carlo_mean(10000, 1, sampler, {2, src.get_token()}), Cancelled);
}

TEST_CASE("ratio of estimates") {
  const auto r = ratio_of(2.0, 0.1, 4.0, 0.2);
  CHECK(r.ratio == 0.5);
  CHECK(r.std_error == doctest::Approx(0.5 * std::sqrt(0.0025 + 0.0025)));
}
