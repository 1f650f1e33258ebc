#pragma once

#include <numbers>
#include <vector>

namespace orlicz {

/// Smooth bump theta(x) = C exp(-1/(1 - 4x^2)) on |x| < 1/2, zero elsewhere,
/// with C fixed so that the integral is 1.
class Mollifier {
 public:
  static const Mollifier& standard();

  double operator()(double x) const;
  double derivative(double x) const;
  /// Integral of theta over (-inf, x]; exactly 0 below -1/2 and 1 above 1/2.
  double antiderivative(double x) const;
  /// sup theta = theta(0).
  double max() const { return constant_ / std::numbers::e; }
  double constant() const { return constant_; }

 private:
  Mollifier();

  double constant_;
  double cell_;
  std::vector<double> cumulative_;
};

}  // namespace orlicz
