#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace affwalk {

// Exact arithmetic is GMP's: mpq_class keeps numerator/denominator reduced
// with a positive denominator after canonicalize().
using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den);

/// Parses "p/q", an integer, or a plain decimal such as "0.25" exactly.
Rational parse_rational(const std::string& text);

double to_double(const Rational& q);
/// Natural log of a positive rational; stays accurate when the value
/// underflows a double.
double log_of(const Rational& q);
double log_of(const Integer& z);

Integer pow2(unsigned long exponent);
/// C(n, k), zero when k < 0 or k > n.
Integer binomial(long n, long k);

std::string to_string(const Integer& z);

/// Row-cached table of binomial coefficients C(n, k) for n <= max_n.
class BinomialTable {
public:
  explicit BinomialTable(unsigned max_n);
  [[nodiscard]] const Integer& operator()(long n, long k) const;
  [[nodiscard]] unsigned max_n() const { return max_n_; }

private:
  unsigned max_n_;
  std::vector<std::vector<Integer>> rows_;
  Integer zero_{0};
};

}  // namespace affwalk
