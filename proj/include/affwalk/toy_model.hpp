#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "affwalk/rational.hpp"

namespace affwalk {

/// Walk on the subgroup sum_j alpha_j Z of R: each step stays put with
/// probability p_0 and moves by +-alpha_j with probability p_j / 2 each.
/// Positions are tracked in lattice coordinates d in Z^N.
class ToyModel {
public:
  /// p holds p_0 .. p_N. Rational independence of alpha cannot be checked
  /// numerically and is carried as the caller's assertion.
  ToyModel(std::vector<double> alpha, std::vector<Rational> p,
           bool rationally_independent = true);

  [[nodiscard]] std::size_t dimension() const { return alpha_.size(); }
  [[nodiscard]] const std::vector<double>& alpha() const { return alpha_; }
  [[nodiscard]] const std::vector<Rational>& p() const { return p_; }
  [[nodiscard]] double p_double(std::size_t i) const { return to_double(p_.at(i)); }
  [[nodiscard]] bool rationally_independent() const { return independent_; }
  /// sum_j p_j alpha_j^2.
  [[nodiscard]] double sigma2() const { return sigma2_; }
  /// phi(s) = p_0 + sum_j p_j cos(s_j).
  [[nodiscard]] double characteristic(const std::vector<double>& s) const;
  /// prod_j (2 pi p_j)^{-1/2}.
  [[nodiscard]] double return_constant() const;

  /// Integer step weights over a common denominator: P[stay] = 2 k_0 / (2D),
  /// P[+-e_j] = k_j / (2D).
  [[nodiscard]] const std::vector<unsigned long>& weights() const { return k_; }
  [[nodiscard]] unsigned long denominator() const { return den_; }

private:
  std::vector<double> alpha_;
  std::vector<Rational> p_;
  bool independent_;
  double sigma2_ = 0.0;
  std::vector<unsigned long> k_;
  unsigned long den_ = 1;
};

/// Lattice cells the exact distribution may hold.
inline constexpr std::size_t kToyCellCap = 4'000'000;

/// Exact law of X_n on the box [-n, n]^N as integer weights over
/// (2D)^n.
class ToyDistribution {
public:
  ToyDistribution(const ToyModel& model, std::size_t steps);

  [[nodiscard]] std::size_t steps() const { return steps_; }
  [[nodiscard]] long radius() const { return radius_; }
  [[nodiscard]] std::size_t dimension() const { return dim_; }
  /// Exact P[X_n = d]; zero outside the box.
  [[nodiscard]] Rational probability(const std::vector<long>& d) const;
  [[nodiscard]] const Integer& weight(const std::vector<long>& d) const;
  [[nodiscard]] const Integer& denominator() const { return denominator_; }
  /// Visits every cell with its coordinates and weight.
  void for_each(const std::function<void(const std::vector<long>&, const Integer&)>& fn) const;

private:
  [[nodiscard]] bool inside(const std::vector<long>& d) const;
  [[nodiscard]] std::size_t offset(const std::vector<long>& d) const;

  std::size_t dim_;
  std::size_t steps_;
  long radius_;
  std::size_t side_;
  std::vector<Integer> cells_;
  Integer denominator_;
  Integer zero_{0};
};

/// r_n = P[X_n = 0], exact.
Rational toy_exact_return(std::size_t n, const ToyModel& model);

struct FourierReturn {
  double value = 0.0;
  double error_estimate = 0.0;  // |I(K) - I(K/2)|
  std::size_t panels = 0;       // Gauss-Legendre panels per axis
  bool converged = true;
};

/// (2 pi)^{-N} int_{[-pi, pi]^N} phi(s)^n ds by composite Gauss-Legendre,
/// max(4, ceil(c sqrt n)) panels per axis on [0, pi] (even symmetry).
FourierReturn toy_fourier_return(std::size_t n, const ToyModel& model, double panel_factor = 2.0,
                                 double tolerance = 1e-12);

struct PointProbability {
  Rational exact;
  double exact_double = 0.0;
  double comparator = 0.0;  // prod_j (2 pi p_j n)^{-1/2} exp(-d_j^2 / (2 p_j n))
  double ratio = 0.0;
};

PointProbability toy_point_prob(std::size_t n, const std::vector<long>& d, const ToyModel& model);

struct WindowProbability {
  Rational exact;  // P[|x_{2n}| < deltainv]
  double exact_double = 0.0;
  double comparator = 0.0;  // 2 deltainv / (sqrt(2 pi 2n) sigma)
  double ratio = 0.0;
  bool comparator_specified = true;  // false when p_0 = 0
};

/// Window probability for x_{2n} = <alpha, X_{2n}>.
WindowProbability toy_window_prob(std::size_t n, double deltainv, const ToyModel& model);
/// Same, reusing an exact distribution of X_{2n}.
WindowProbability toy_window_prob(const ToyDistribution& dist, double deltainv,
                                  const ToyModel& model);

struct WeylAverage {
  double average = 0.0;     // mean of f(<alpha, d> mod L) over |d_j| <= M
  double comparator = 0.0;  // (1/L) int_0^L f
  std::size_t points = 0;
};

WeylAverage weyl_average(const std::vector<double>& alpha, double period,
                         const std::function<double(double)>& f, long radius);

struct WeylDiagnostic {
  double max_harmonic = 0.0;  // max over k <= K of |mean e^{2 pi i k x / L}|
  int worst_harmonic = 0;
  bool equidistributed = true;  // max_harmonic <= threshold
};

/// Falsification tool for rational independence: Fourier coefficients of the
/// empirical distribution of <alpha, d> mod L for harmonics 1..K.
WeylDiagnostic weyl_diagnostic(const std::vector<double>& alpha, double period, long radius,
                               int harmonics = 8, double threshold = 0.05);

}  // namespace affwalk
