#pragma once

#include <vector>

#include "gbdt/types.hpp"

namespace gbdt {

/// Scalar seed potential u(x) of the undressed system; V(x) is the
/// off-diagonal matrix [[0, u], [-conj(u), 0]]. Complex u is accepted; the
/// realness-dependent guarantees are gated on is_real().
class SeedPotential {
 public:
  enum class Kind { Zero, Constant, Gaussian, Tabulated };

  static SeedPotential zero();
  static SeedPotential constant(Complex c);
  /// u(x) = amp * exp(-((x - center) / width)^2 / 2), width > 0.
  static SeedPotential gaussian(double amp, double center, double width);
  /// Piecewise-linear through strictly increasing knots; constant beyond the
  /// first/last knot.
  static SeedPotential tabulated(std::vector<double> knots, std::vector<Complex> values);

  Kind kind() const { return kind_; }
  Complex u(double x) const;
  Eigen::Matrix2cd V(double x) const;

  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_real() const;

  /// Knot locations strictly inside (lo, hi); integration restarts there so
  /// slope jumps never sit inside a step.
  std::vector<double> breakpoints(double lo, double hi) const;

  // Parameters (meaningful per kind).
  Complex constant_value() const { return constant_; }
  double amp() const { return amp_; }
  double center() const { return center_; }
  double width() const { return width_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<Complex>& values() const { return values_; }

 private:
  SeedPotential() = default;

  Kind kind_ = Kind::Zero;
  Complex constant_{0.0, 0.0};
  double amp_ = 0.0, center_ = 0.0, width_ = 1.0;
  std::vector<double> knots_;
  std::vector<Complex> values_;
};

}  // namespace gbdt
