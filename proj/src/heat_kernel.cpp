#include "affwalk/heat_kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_1.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace affwalk {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kTailExponent = 40.0;  // e^{-40} relative Gaussian tail

double log_sinh(double x) {
  if (x > 20.0) {
    return x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
  }
  return std::log(std::sinh(x));
}

void check_query(const HeatKernelQuery& q) {
  if (!(q.t > 0.0) || !std::isfinite(q.t)) {
    throw std::invalid_argument("heat kernel: t must be positive and finite");
  }
  if (!(q.r >= 0.0) || !std::isfinite(q.r)) {
    throw std::invalid_argument("heat kernel: r must be nonnegative and finite");
  }
}

struct IntegralResult {
  double value;
  double error;
};

// int_r^inf u e^{-u^2/2t} / sqrt(cosh u - cosh r) du, with u = r + v^2.
IntegralResult h2_integral(double t, double r, const QuadratureOptions& opts) {
  auto integrand = [t, r](double v) {
    if (v <= 0.0) {
      return r > 0.0 ? 2.0 * r * std::exp(-r * r / (2.0 * t)) / std::sqrt(std::sinh(r)) : 0.0;
    }
    const double v2 = v * v;
    const double u = r + v2;
    // cosh(r + v^2) - cosh r = 2 sinh(r + v^2/2) sinh(v^2/2)
    const double log_den =
        0.5 * (std::numbers::ln2 + log_sinh(r + 0.5 * v2) + log_sinh(0.5 * v2));
    return std::exp(std::log(2.0 * u * v) - u * u / (2.0 * t) - log_den);
  };
  const double v_max = std::pow(2.0 * t * kTailExponent, 0.25);
  double error = 0.0;
  double l1 = 0.0;
  const double value = gauss_kronrod<double, 31>::integrate(integrand, 0.0, v_max, opts.max_depth,
                                                            opts.rel_tol, &error, &l1);
  const double allowed = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
  if (!std::isfinite(value) || error > 10.0 * allowed) {
    std::ostringstream msg;
    msg << "heat kernel quadrature did not converge at t=" << t << ", r=" << r
        << " (error estimate " << error << ")";
    throw AccuracyError(msg.str(), error);
  }
  return {value, error};
}

double log_h2_prefactor(double t) {
  // log( sqrt(2) / (2 pi t)^{3/2} ), without the e^{-t/8}
  return 0.5 * std::numbers::ln2 - 1.5 * std::log(2.0 * std::numbers::pi * t);
}

}  // namespace

KernelValue p_h2(const HeatKernelQuery& q, const QuadratureOptions& opts) {
  check_query(q);
  const auto integral = h2_integral(q.t, q.r, opts);
  const double scale = std::exp(log_h2_prefactor(q.t) - q.t / 8.0);
  return {scale * integral.value, scale * integral.error};
}

double p_h2_points(double t, const GroupElement& g, const GroupElement& h) {
  return p_h2({t, hyperbolic_distance(g, h)}).value;
}

DoobSpec affine_doob_spec() {
  return {-0.125, [](const GroupElement& g) { return std::sqrt(g.a()); }};
}

double doob_density(const DoobSpec& spec, const KernelFunction& base, double t,
                    const GroupElement& g, const GroupElement& h) {
  const double psi_g = spec.psi(g);
  const double psi_h = spec.psi(h);
  if (!(psi_g > 0.0) || !(psi_h > 0.0)) {
    throw std::domain_error("doob_density: psi must be strictly positive");
  }
  return std::exp(-spec.lambda * t) * base(t, g, h) * psi_h / psi_g;
}

KernelValue p_aff(double t, const GroupElement& g, const GroupElement& h,
                  const QuadratureOptions& opts) {
  const HeatKernelQuery q{t, hyperbolic_distance(g, h)};
  check_query(q);
  const auto integral = h2_integral(q.t, q.r, opts);
  // e^{t/8} from the transform cancels the e^{-t/8} of p_h2 exactly
  const double scale = std::exp(log_h2_prefactor(t) + 0.5 * std::log(h.a() / g.a()));
  return {scale * integral.value, scale * integral.error};
}

double diag_asymptotic_ratio(double t, const QuadratureOptions& opts) {
  const GroupElement e;
  return std::pow(t, 1.5) * p_aff(t, e, e, opts).value / kStatedDiagonalConstant;
}

double diagonal_limit_integral() {
  auto f = [](double u) { return u > 0.0 ? u / std::sinh(0.5 * u) : 2.0; };
  double error = 0.0;
  return gauss_kronrod<double, 31>::integrate(f, 0.0, 200.0, 25, 1e-13, &error);
}

namespace {

double radial_cutoff(double t) { return t + 14.0 * std::sqrt(t) + 10.0; }

// K(k) with k' = sqrt(1 - k^2) supplied directly, to keep accuracy as k -> 1.
double elliptic_k_from_complement(double kc) {
  if (kc < 1e-4) {
    const double l = std::log(4.0 / kc);
    return l + 0.25 * kc * kc * (l - 1.0);
  }
  return boost::math::ellint_1(std::sqrt((1.0 - kc) * (1.0 + kc)));
}

}  // namespace

double h2_normalization(double t) {
  auto f = [t](double r) {
    return p_h2({t, r}).value * 2.0 * std::numbers::pi * std::sinh(r);
  };
  double error = 0.0;
  return gauss_kronrod<double, 31>::integrate(f, 0.0, radial_cutoff(t), 15, 1e-10, &error);
}

double chapman_kolmogorov(double s, double t, double r) {
  const double sinh_r = std::sinh(r);
  const QuadratureOptions inner{1e-13, 1e-10, 25};
  auto radial = [&](double rho) {
    if (rho <= 0.0) {
      return 0.0;
    }
    const double ps = p_h2({s, rho}, inner).value;
    const double half = std::sinh(0.5 * (rho - r));
    const double sinh_rho = std::sinh(rho);
    auto angular = [&](double theta) {
      const double sh = std::sin(0.5 * theta);
      // cosh d - 1 = 2 sinh^2((rho - r)/2) + 2 sinh rho sinh r sin^2(theta/2)
      const double delta = 2.0 * half * half + 2.0 * sinh_rho * sinh_r * sh * sh;
      return p_h2({t, arcosh1p(delta)}, inner).value;
    };
    double err = 0.0;
    const double ang =
        2.0 * gauss_kronrod<double, 31>::integrate(angular, 0.0, std::numbers::pi, 12, 1e-9, &err);
    return ps * ang * sinh_rho;
  };
  double error = 0.0;
  const double upper = radial_cutoff(s);
  return gauss_kronrod<double, 31>::integrate(radial, 0.0, upper, 12, 1e-9, &error);
}

AffNormalization aff_normalization(double t) {
  // h at polar (rho, phi) about e has c = 1 / (cosh rho - sinh rho cos phi), and
  // int_0^{2 pi} (cosh rho - sinh rho cos phi)^{-1/2} dphi = 4 e^{-rho/2} K(k), k' = e^{-rho}.
  AffNormalization out;
  out.radius = radial_cutoff(t) + 0.5 * t;
  auto f = [t](double rho) {
    if (rho <= 0.0) {
      return 0.0;
    }
    const double kernel = p_h2({t, rho}).value;
    const double angular = 4.0 * std::exp(-0.5 * rho) * elliptic_k_from_complement(std::exp(-rho));
    return std::exp(t / 8.0) * kernel * std::sinh(rho) * angular;
  };
  double error = 0.0;
  out.integral = gauss_kronrod<double, 31>::integrate(f, 0.0, out.radius, 15, 1e-10, &error);
  out.tail_bound = f(out.radius) * out.radius;
  return out;
}

PotentialGrid::PotentialGrid(double x_min, double x_max, std::size_t nx, double b_min,
                             double b_max, std::size_t nb, std::vector<double> values)
    : x_min_(x_min), x_max_(x_max), b_min_(b_min), b_max_(b_max), nx_(nx), nb_(nb),
      values_(std::move(values)) {
  if (nx == 0 || nb == 0 || !(x_max > x_min) || !(b_max > b_min)) {
    throw std::invalid_argument("PotentialGrid: empty or inverted grid");
  }
  if (values_.size() != nx * nb) {
    throw std::invalid_argument("PotentialGrid: value count does not match grid shape");
  }
  for (double w : values_) {
    if (!(w <= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("PotentialGrid: W must be finite and nonpositive");
    }
  }
}

PotentialGrid PotentialGrid::sample(const std::function<double(const GroupElement&)>& potential,
                                    double x_min, double x_max, std::size_t nx, double b_min,
                                    double b_max, std::size_t nb) {
  std::vector<double> values(nx * nb);
  const double dx = (x_max - x_min) / static_cast<double>(nx);
  const double db = (b_max - b_min) / static_cast<double>(nb);
  for (std::size_t i = 0; i < nx; ++i) {
    const double a = std::exp(x_min + (static_cast<double>(i) + 0.5) * dx);
    for (std::size_t j = 0; j < nb; ++j) {
      const double b = b_min + (static_cast<double>(j) + 0.5) * db;
      values[i * nb + j] = potential(GroupElement(a, b));
    }
  }
  return {x_min, x_max, nx, b_min, b_max, nb, std::move(values)};
}

double PotentialGrid::cell_measure(std::size_t i, std::size_t j) const {
  (void)j;
  const double dx = (x_max_ - x_min_) / static_cast<double>(nx_);
  const double db = (b_max_ - b_min_) / static_cast<double>(nb_);
  const double x0 = x_min_ + static_cast<double>(i) * dx;
  // int_{x0}^{x0+dx} e^{-x} dx
  return std::exp(-x0) * -std::expm1(-dx) * db;
}

SchrodingerBound schrodinger_bound_rhs(const PotentialGrid& grid, double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw std::invalid_argument("schrodinger_bound_rhs: constants must be positive");
  }
  SchrodingerBound out;
  double boundary = 0.0;
  for (std::size_t i = 0; i < grid.nx(); ++i) {
    for (std::size_t j = 0; j < grid.nb(); ++j) {
      const double w = std::abs(grid.value(i, j));
      if (w == 0.0) {
        continue;
      }
      const double mu = grid.cell_measure(i, j);
      double contribution = 0.0;
      if (w <= 1.0) {
        contribution = std::pow(w, 0.75) * mu;
        out.small_integral += contribution;
      } else {
        contribution = w * mu;
        out.large_integral += contribution;
      }
      if (i == 0 || j == 0 || i + 1 == grid.nx() || j + 1 == grid.nb()) {
        boundary += contribution;
      }
    }
  }
  out.total = c1 * out.small_integral + c2 * out.large_integral;
  const double mass = out.small_integral + out.large_integral;
  out.truncation_estimate = mass > 0.0 ? boundary / mass : 0.0;
  out.truncation_warning = out.truncation_estimate > 0.01;
  return out;
}

}  // namespace affwalk
