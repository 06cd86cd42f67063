#include "affwalk/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace affwalk {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) {
    throw std::domain_error("make_rational: zero denominator");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(long num, long den) { return make_rational(Integer(num), Integer(den)); }

Rational parse_rational(const std::string& text) {
  std::string body = text;
  bool negative = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    negative = body[0] == '-';
    body.erase(0, 1);
  }
  Rational q;
  try {
    const auto slash = body.find('/');
    const auto dot = body.find('.');
    if (slash != std::string::npos) {
      q = make_rational(Integer(body.substr(0, slash)), Integer(body.substr(slash + 1)));
    } else if (dot != std::string::npos) {
      const std::string whole = body.substr(0, dot);
      const std::string frac = body.substr(dot + 1);
      const std::string digits = (whole.empty() ? "0" : whole) + frac;
      q = make_rational(Integer(digits), Integer("1" + std::string(frac.size(), '0')));
    } else {
      q = Rational(Integer(body));
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("parse_rational: cannot parse '" + text + "'");
  }
  return negative ? Rational(-q) : q;
}

double to_double(const Rational& q) {
  // get_d truncates; pick the nearer of the two bracketing doubles.
  const double d = q.get_d();
  if (q == 0 || !std::isfinite(d)) {
    return d;
  }
  const double away = std::nextafter(d, q > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(away)) {
    return d;
  }
  const Rational gap_d = abs(q - Rational(d));
  const Rational gap_away = abs(q - Rational(away));
  return gap_away < gap_d ? away : d;
}

double log_of(const Integer& z) {
  if (z <= 0) {
    throw std::domain_error("log_of: argument must be positive");
  }
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

double log_of(const Rational& q) {
  if (q <= 0) {
    throw std::domain_error("log_of: argument must be positive");
  }
  return log_of(q.get_num()) - log_of(q.get_den());
}

Integer pow2(unsigned long exponent) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, exponent);
  return r;
}

Integer binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) {
    return 0;
  }
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

std::string to_string(const Integer& z) { return z.get_str(); }

BinomialTable::BinomialTable(unsigned max_n) : max_n_(max_n), rows_(max_n + 1) {
  for (unsigned n = 0; n <= max_n; ++n) {
    rows_[n].resize(n + 1);
    rows_[n][0] = 1;
    rows_[n][n] = 1;
    for (unsigned k = 1; k < n; ++k) {
      rows_[n][k] = rows_[n - 1][k - 1] + rows_[n - 1][k];
    }
  }
}

const Integer& BinomialTable::operator()(long n, long k) const {
  if (n < 0 || k < 0 || k > n) {
    return zero_;
  }
  if (n > static_cast<long>(max_n_)) {
    throw std::out_of_range("BinomialTable: n exceeds cached range");
  }
  return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

}  // namespace affwalk
