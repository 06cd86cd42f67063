#pragma once

#include <cmath>
#include <numbers>

namespace affwalk {

/// A point (a, b) of Aff(R), i.e. the affine map x -> a x + b with a > 0.
/// Represented by the upper-triangular matrix [[a, b], [0, 1]].
class GroupElement {
public:
  /// Identity (1, 0).
  constexpr GroupElement() = default;
  /// Throws std::invalid_argument unless a > 0 and both coordinates are finite.
  GroupElement(double a, double b);

  [[nodiscard]] constexpr double a() const { return a_; }
  [[nodiscard]] constexpr double b() const { return b_; }

  static constexpr GroupElement identity() { return {}; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

private:
  double a_ = 1.0;
  double b_ = 0.0;
};

/// Coordinates (x, y) in the Lie algebra plane, matrix [[x, y], [0, 0]].
struct AlgebraElement {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;
};

/// Group law: matrix product g * h = (g.a h.a, g.a h.b + g.b).
GroupElement compose(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

/// (x, y) -> (e^x, e^x y). Throws std::range_error when e^x overflows or
/// underflows to zero.
GroupElement exp_map(const AlgebraElement& v);
/// Inverse chart: (a, b) -> (ln a, b / a).
AlgebraElement log_map(const GroupElement& g);

/// arcosh(1 + delta) evaluated without cancellation for small delta.
double arcosh1p(double delta);

/// Geodesic distance of the metric (da^2 + db^2) / a^2 (upper half-plane
/// b + i a): arcosh(1 + |p - q|^2 / (2 a_p a_q)).
double hyperbolic_distance(const GroupElement& p, const GroupElement& q);

/// Volume of a geodesic ball of radius R: 2 pi (cosh R - 1).
/// Throws std::invalid_argument for negative or non-finite R.
double ball_volume(double radius);

}  // namespace affwalk
