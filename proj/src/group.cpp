#include "affwalk/group.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace affwalk {

GroupElement::GroupElement(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("GroupElement: coordinates must be finite");
  }
  if (!(a > 0.0)) {
    throw std::invalid_argument("GroupElement: dilation a must be positive, got " +
                                std::to_string(a));
  }
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  return {g.a() * h.a(), g.a() * h.b() + g.b()};
}

GroupElement inverse(const GroupElement& g) { return {1.0 / g.a(), -g.b() / g.a()}; }

GroupElement exp_map(const AlgebraElement& v) {
  if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
    throw std::range_error("exp_map: non-finite algebra coordinates");
  }
  const double a = std::exp(v.x);
  if (!std::isfinite(a) || a == 0.0) {
    throw std::range_error("exp_map: e^x out of floating range for x = " + std::to_string(v.x));
  }
  const double b = a * v.y;
  if (!std::isfinite(b)) {
    throw std::range_error("exp_map: translation e^x y overflows");
  }
  return {a, b};
}

AlgebraElement log_map(const GroupElement& g) { return {std::log(g.a()), g.b() / g.a()}; }

double arcosh1p(double delta) {
  // arcosh(1 + d) = log1p(d + sqrt(d (2 + d)))
  return std::log1p(delta + std::sqrt(delta * (2.0 + delta)));
}

double hyperbolic_distance(const GroupElement& p, const GroupElement& q) {
  const double da = p.a() - q.a();
  const double db = p.b() - q.b();
  const double delta = (da * da + db * db) / (2.0 * p.a() * q.a());
  return arcosh1p(delta);
}

double ball_volume(double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball_volume: radius must be a finite nonnegative number");
  }
  // cosh R - 1 = 2 sinh^2(R/2), exact near 0
  const double s = std::sinh(0.5 * radius);
  return 2.0 * std::numbers::pi * 2.0 * s * s;
}

}  // namespace affwalk
