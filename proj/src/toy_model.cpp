#include "affwalk/toy_model.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace affwalk {

namespace {

constexpr double kPi = std::numbers::pi;

struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Composite 20-point Gauss-Legendre on [0, pi] with `panels` equal panels.
AxisRule composite_rule(std::size_t panels) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  AxisRule rule;
  const double width = kPi / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) {
    const double mid = (static_cast<double>(k) + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) {
        rule.nodes.push_back(mid);
        rule.weights.push_back(half * w[i]);
        continue;
      }
      rule.nodes.push_back(mid - half * x[i]);
      rule.weights.push_back(half * w[i]);
      rule.nodes.push_back(mid + half * x[i]);
      rule.weights.push_back(half * w[i]);
    }
  }
  return rule;
}

double torus_integral(const ToyModel& model, std::size_t n, std::size_t panels) {
  const AxisRule rule = composite_rule(panels);
  const std::size_t dim = model.dimension();
  std::vector<std::vector<double>> terms(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double pj = model.p_double(j + 1);
    for (double s : rule.nodes) {
      terms[j].push_back(pj * std::cos(s));
    }
  }
  const double p0 = model.p_double(0);
  const auto exponent = static_cast<double>(n);
  std::function<double(std::size_t, double)> level = [&](std::size_t axis, double partial) {
    double sum = 0.0;
    const auto& t = terms[axis];
    if (axis + 1 == dim) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        sum += rule.weights[i] * std::pow(partial + t[i], exponent);
      }
      return sum;
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      sum += rule.weights[i] * level(axis + 1, partial + t[i]);
    }
    return sum;
  };
  return level(0, p0) / std::pow(kPi, static_cast<double>(dim));
}

}  // namespace

ToyModel::ToyModel(std::vector<double> alpha, std::vector<Rational> p, bool rationally_independent)
    : alpha_(std::move(alpha)), p_(std::move(p)), independent_(rationally_independent) {
  if (alpha_.empty()) {
    throw std::invalid_argument("ToyModel: need at least one generator");
  }
  if (p_.size() != alpha_.size() + 1) {
    throw std::invalid_argument("ToyModel: p must list p_0 .. p_N");
  }
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("ToyModel: generators must be positive and finite");
    }
  }
  Rational total(0);
  for (auto& q : p_) {
    q.canonicalize();
    total += q;
  }
  if (total != 1) {
    throw std::invalid_argument("ToyModel: probabilities must sum to exactly 1");
  }
  if (p_[0] < 0 || p_[0] >= 1) {
    throw std::invalid_argument("ToyModel: p_0 must lie in [0, 1)");
  }
  for (std::size_t j = 1; j < p_.size(); ++j) {
    if (p_[j] <= 0 || p_[j] > 1) {
      throw std::invalid_argument("ToyModel: p_j must lie in (0, 1] for j >= 1");
    }
  }
  for (std::size_t j = 0; j < alpha_.size(); ++j) {
    sigma2_ += to_double(p_[j + 1]) * alpha_[j] * alpha_[j];
  }
  Integer lcm(1);
  for (const auto& q : p_) {
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
  }
  if (!lcm.fits_ulong_p() || lcm > Integer(1UL << 30)) {
    throw std::invalid_argument("ToyModel: probability denominators too large");
  }
  den_ = lcm.get_ui();
  for (const auto& q : p_) {
    const Integer k = q.get_num() * (lcm / q.get_den());
    k_.push_back(k.get_ui());
  }
}

double ToyModel::characteristic(const std::vector<double>& s) const {
  if (s.size() != alpha_.size()) {
    throw std::invalid_argument("ToyModel::characteristic: dimension mismatch");
  }
  double phi = p_double(0);
  for (std::size_t j = 0; j < s.size(); ++j) {
    phi += p_double(j + 1) * std::cos(s[j]);
  }
  return phi;
}

double ToyModel::return_constant() const {
  double c = 1.0;
  for (std::size_t j = 1; j < p_.size(); ++j) {
    c /= std::sqrt(2.0 * kPi * to_double(p_[j]));
  }
  return c;
}

ToyDistribution::ToyDistribution(const ToyModel& model, std::size_t steps)
    : dim_(model.dimension()), steps_(steps), radius_(static_cast<long>(steps)),
      side_(2 * steps + 1) {
  double cells = 1.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    cells *= static_cast<double>(side_);
  }
  if (cells > static_cast<double>(kToyCellCap)) {
    throw std::invalid_argument(
        "ToyDistribution: lattice box exceeds the exact cap; use toy_fourier_return");
  }
  const auto total = static_cast<std::size_t>(cells);
  std::vector<std::size_t> stride(dim_);
  {
    std::size_t s = 1;
    for (std::size_t j = dim_; j-- > 0;) {
      stride[j] = s;
      s *= side_;
    }
  }
  cells_.assign(total, Integer(0));
  std::vector<Integer> next(total, Integer(0));
  std::size_t centre = 0;
  for (std::size_t j = 0; j < dim_; ++j) {
    centre += static_cast<std::size_t>(radius_) * stride[j];
  }
  cells_[centre] = 1;
  const auto& k = model.weights();
  const unsigned long stay = 2 * k[0];
  std::vector<long> d(dim_);
  for (std::size_t step = 0; step < steps; ++step) {
    const long r = static_cast<long>(step) + 1;
    std::fill(d.begin(), d.end(), -r);
    for (;;) {
      long l1 = 0;
      for (long v : d) {
        l1 += std::abs(v);
      }
      if (l1 <= r) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < dim_; ++j) {
          idx += static_cast<std::size_t>(d[j] + radius_) * stride[j];
        }
        mpz_ptr out = next[idx].get_mpz_t();
        if (stay != 0) {
          mpz_mul_ui(out, cells_[idx].get_mpz_t(), stay);
        } else {
          mpz_set_ui(out, 0);
        }
        for (std::size_t j = 0; j < dim_; ++j) {
          if (d[j] > -radius_) {
            mpz_addmul_ui(out, cells_[idx - stride[j]].get_mpz_t(), k[j + 1]);
          }
          if (d[j] < radius_) {
            mpz_addmul_ui(out, cells_[idx + stride[j]].get_mpz_t(), k[j + 1]);
          }
        }
      }
      std::size_t j = dim_;
      while (j-- > 0) {
        if (d[j] < r) {
          ++d[j];
          break;
        }
        d[j] = -r;
      }
      if (j == static_cast<std::size_t>(-1)) {
        break;
      }
    }
    std::swap(cells_, next);
  }
  mpz_ui_pow_ui(denominator_.get_mpz_t(), 2 * model.denominator(), steps);
}

bool ToyDistribution::inside(const std::vector<long>& d) const {
  if (d.size() != dim_) {
    throw std::invalid_argument("ToyDistribution: point dimension mismatch");
  }
  for (long v : d) {
    if (std::abs(v) > radius_) {
      return false;
    }
  }
  return true;
}

std::size_t ToyDistribution::offset(const std::vector<long>& d) const {
  std::size_t idx = 0;
  for (long v : d) {
    idx = idx * side_ + static_cast<std::size_t>(v + radius_);
  }
  return idx;
}

const Integer& ToyDistribution::weight(const std::vector<long>& d) const {
  return inside(d) ? cells_[offset(d)] : zero_;
}

Rational ToyDistribution::probability(const std::vector<long>& d) const {
  return make_rational(weight(d), denominator_);
}

void ToyDistribution::for_each(
    const std::function<void(const std::vector<long>&, const Integer&)>& fn) const {
  std::vector<long> d(dim_, -radius_);
  for (std::size_t idx = 0; idx < cells_.size(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t j = dim_; j-- > 0;) {
      d[j] = static_cast<long>(rest % side_) - radius_;
      rest /= side_;
    }
    if (cells_[idx] != 0) {
      fn(d, cells_[idx]);
    }
  }
}

Rational toy_exact_return(std::size_t n, const ToyModel& model) {
  const ToyDistribution dist(model, n);
  return dist.probability(std::vector<long>(model.dimension(), 0));
}

FourierReturn toy_fourier_return(std::size_t n, const ToyModel& model, double panel_factor,
                                 double tolerance) {
  if (n == 0) {
    throw std::invalid_argument("toy_fourier_return: n must be at least 1");
  }
  if (model.dimension() > 4) {
    throw std::invalid_argument("toy_fourier_return: tensor quadrature limited to N <= 4");
  }
  FourierReturn r;
  r.panels = std::max<std::size_t>(
      4, static_cast<std::size_t>(std::ceil(panel_factor * std::sqrt(static_cast<double>(n)))));
  r.value = torus_integral(model, n, r.panels);
  const double coarse = torus_integral(model, n, std::max<std::size_t>(2, r.panels / 2));
  r.error_estimate = std::abs(r.value - coarse);
  r.converged = r.error_estimate <= std::max(tolerance, 1e-8 * std::abs(r.value));
  return r;
}

PointProbability toy_point_prob(std::size_t n, const std::vector<long>& d, const ToyModel& model) {
  if (d.size() != model.dimension()) {
    throw std::invalid_argument("toy_point_prob: point dimension mismatch");
  }
  const ToyDistribution dist(model, n);
  PointProbability out;
  out.exact = dist.probability(d);
  out.exact_double = to_double(out.exact);
  out.comparator = 1.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double var = model.p_double(j + 1) * static_cast<double>(n);
    const double dj = static_cast<double>(d[j]);
    out.comparator *= std::exp(-dj * dj / (2.0 * var)) / std::sqrt(2.0 * kPi * var);
  }
  out.ratio = out.exact_double / out.comparator;
  return out;
}

WindowProbability toy_window_prob(const ToyDistribution& dist, double deltainv,
                                  const ToyModel& model) {
  if (!(deltainv > 0.0)) {
    throw std::invalid_argument("toy_window_prob: window must be positive");
  }
  const auto& alpha = model.alpha();
  Integer inside(0);
  dist.for_each([&](const std::vector<long>& d, const Integer& w) {
    double x = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      x += alpha[j] * static_cast<double>(d[j]);
    }
    if (std::abs(x) < deltainv) {
      inside += w;
    }
  });
  WindowProbability out;
  out.exact = make_rational(inside, dist.denominator());
  out.exact_double = to_double(out.exact);
  const auto steps = static_cast<double>(dist.steps());
  out.comparator = 2.0 * deltainv / (std::sqrt(2.0 * kPi * steps) * std::sqrt(model.sigma2()));
  out.ratio = out.exact_double / out.comparator;
  out.comparator_specified = model.p()[0] > 0;
  return out;
}

WindowProbability toy_window_prob(std::size_t n, double deltainv, const ToyModel& model) {
  const ToyDistribution dist(model, 2 * n);
  return toy_window_prob(dist, deltainv, model);
}

namespace {

template <class Fn>
void for_each_box_point(std::size_t dim, long radius, Fn fn) {
  std::vector<long> d(dim, -radius);
  for (;;) {
    fn(d);
    std::size_t j = dim;
    while (j-- > 0) {
      if (d[j] < radius) {
        ++d[j];
        break;
      }
      d[j] = -radius;
    }
    if (j == static_cast<std::size_t>(-1)) {
      return;
    }
  }
}

double reduce(const std::vector<double>& alpha, const std::vector<long>& d, double period) {
  double x = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    x += alpha[j] * static_cast<double>(d[j]);
  }
  x = std::fmod(x, period);
  return x < 0.0 ? x + period : x;
}

void check_weyl_args(const std::vector<double>& alpha, double period, long radius) {
  if (alpha.empty() || !(period > 0.0) || radius < 0) {
    throw std::invalid_argument("weyl: need generators, a positive period and radius >= 0");
  }
}

}  // namespace

WeylAverage weyl_average(const std::vector<double>& alpha, double period,
                         const std::function<double(double)>& f, long radius) {
  check_weyl_args(alpha, period, radius);
  WeylAverage out;
  double sum = 0.0;
  for_each_box_point(alpha.size(), radius, [&](const std::vector<long>& d) {
    sum += f(reduce(alpha, d, period));
    ++out.points;
  });
  out.average = sum / static_cast<double>(out.points);
  double err = 0.0;
  out.comparator = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                       f, 0.0, period, 15, 1e-12, &err) /
                   period;
  return out;
}

WeylDiagnostic weyl_diagnostic(const std::vector<double>& alpha, double period, long radius,
                               int harmonics, double threshold) {
  check_weyl_args(alpha, period, radius);
  if (harmonics < 1) {
    throw std::invalid_argument("weyl_diagnostic: need at least one harmonic");
  }
  std::vector<double> re(static_cast<std::size_t>(harmonics), 0.0);
  std::vector<double> im(static_cast<std::size_t>(harmonics), 0.0);
  std::size_t points = 0;
  for_each_box_point(alpha.size(), radius, [&](const std::vector<long>& d) {
    const double phase = 2.0 * kPi * reduce(alpha, d, period) / period;
    for (int k = 1; k <= harmonics; ++k) {
      re[static_cast<std::size_t>(k - 1)] += std::cos(k * phase);
      im[static_cast<std::size_t>(k - 1)] += std::sin(k * phase);
    }
    ++points;
  });
  WeylDiagnostic out;
  for (int k = 1; k <= harmonics; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    const double mod = std::hypot(re[i], im[i]) / static_cast<double>(points);
    if (mod > out.max_harmonic) {
      out.max_harmonic = mod;
      out.worst_harmonic = k;
    }
  }
  out.equidistributed = out.max_harmonic <= threshold;
  return out;
}

}  // namespace affwalk
