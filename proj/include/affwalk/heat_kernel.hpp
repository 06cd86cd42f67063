#pragma once

#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "affwalk/group.hpp"

namespace affwalk {

/// Raised when adaptive quadrature cannot meet its tolerance within the
/// refinement budget.
class AccuracyError : public std::runtime_error {
public:
  AccuracyError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  [[nodiscard]] double achieved_error() const { return achieved_error_; }

private:
  double achieved_error_;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  unsigned max_depth = 25;
};

struct HeatKernelQuery {
  double t;  // time, > 0
  double r;  // hyperbolic distance, >= 0
};

struct KernelValue {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute
};

/// Heat kernel of the hyperbolic plane for the generator (1/2) a^2 Delta,
/// density w.r.t. da db / a^2:
///   sqrt(2) e^{-t/8} / (2 pi t)^{3/2} * int_r^inf u e^{-u^2/2t} / sqrt(cosh u - cosh r) du.
/// The substitution u = r + v^2 removes the endpoint singularity.
KernelValue p_h2(const HeatKernelQuery& q, const QuadratureOptions& opts = {});

/// p_h2 as a function of two points.
double p_h2_points(double t, const GroupElement& g, const GroupElement& h);

using KernelFunction = std::function<double(double, const GroupElement&, const GroupElement&)>;

/// A positive lambda-harmonic function psi, (1/2) Delta psi = lambda psi.
struct DoobSpec {
  double lambda = 0.0;
  std::function<double(const GroupElement&)> psi;
};

/// psi(a, b) = a^{1/2}, lambda = -1/8: the transform taking hyperbolic
/// Brownian motion to Brownian motion on Aff(R).
DoobSpec affine_doob_spec();

/// e^{-lambda t} base(t, g, h) psi(h) / psi(g).
double doob_density(const DoobSpec& spec, const KernelFunction& base, double t,
                    const GroupElement& g, const GroupElement& h);

/// Density of Brownian motion on Aff(R) w.r.t. da db / a^2.
KernelValue p_aff(double t, const GroupElement& g, const GroupElement& h,
                  const QuadratureOptions& opts = {});

/// Large-time diagonal constant as stated for t^{3/2} p_aff(t, e, e).
inline constexpr double kStatedDiagonalConstant = 1.2533141373155002;  // sqrt(pi/2)

/// t^{3/2} p_aff(t, e, e) / sqrt(pi / 2).
double diag_asymptotic_ratio(double t, const QuadratureOptions& opts = {});

/// int_0^inf u / sinh(u/2) du by quadrature; the large-time limit of
/// t^{3/2} p_aff(t, e, e) is this integral over (2 pi)^{3/2}.
double diagonal_limit_integral();

/// int_0^inf p_h2(t, r) 2 pi sinh r dr.
double h2_normalization(double t);

/// int_{H^2} p_h2(s, d(o, z)) p_h2(t, d(z, y)) dvol(z) for d(o, y) = r, in
/// geodesic polar coordinates about o.
double chapman_kolmogorov(double s, double t, double r);

struct AffNormalization {
  double integral = 0.0;
  double radius = 0.0;  // hyperbolic radius of the integration domain about e
  double tail_bound = 0.0;
};

/// int p_aff(t, e, h) da db / a^2 over a hyperbolic ball about e. Polar
/// coordinates turn the angular part into a complete elliptic integral.
AffNormalization aff_normalization(double t);

/// Potential W <= 0 sampled cell-wise on a grid uniform in x = ln a and b.
/// Each cell carries the exact measure int da db / a^2 = (e^{-x0} - e^{-x1}) db.
class PotentialGrid {
public:
  PotentialGrid(double x_min, double x_max, std::size_t nx, double b_min, double b_max,
                std::size_t nb, std::vector<double> values);

  /// Samples W at cell midpoints.
  static PotentialGrid sample(const std::function<double(const GroupElement&)>& potential,
                              double x_min, double x_max, std::size_t nx, double b_min,
                              double b_max, std::size_t nb);

  [[nodiscard]] std::size_t nx() const { return nx_; }
  [[nodiscard]] std::size_t nb() const { return nb_; }
  [[nodiscard]] double value(std::size_t i, std::size_t j) const { return values_[i * nb_ + j]; }
  [[nodiscard]] double cell_measure(std::size_t i, std::size_t j) const;

private:
  double x_min_, x_max_, b_min_, b_max_;
  std::size_t nx_, nb_;
  std::vector<double> values_;
};

struct SchrodingerBound {
  double total = 0.0;           // c1 * small_integral + c2 * large_integral
  double small_integral = 0.0;  // int_{|W| <= 1} |W|^{3/4} dsigma
  double large_integral = 0.0;  // int_{|W| > 1} |W| dsigma
  double truncation_estimate = 0.0;  // share of the integrand carried by boundary cells
  bool truncation_warning = false;   // truncation_estimate > 1%
};

SchrodingerBound schrodinger_bound_rhs(const PotentialGrid& grid, double c1 = 1.0,
                                       double c2 = 1.0);

}  // namespace affwalk
