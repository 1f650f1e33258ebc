#include "orlicz/mollifier.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace orlicz {

namespace {

double unnormalized(double x) {
  const double s = 1.0 - 4.0 * x * x;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

constexpr int kCells = 1024;

}  // namespace

Mollifier::Mollifier() {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double mass = GK::integrate(unnormalized, -0.5, 0.5, 20, 1e-15);
  constant_ = 1.0 / mass;
  cell_ = 1.0 / kCells;
  cumulative_.assign(kCells + 1, 0.0);
  using G = boost::math::quadrature::gauss<double, 20>;
  for (int i = 0; i < kCells; ++i) {
    const double a = -0.5 + i * cell_;
    cumulative_[i + 1] = cumulative_[i] + G::integrate([this](double x) { return (*this)(x); }, a, a + cell_);
  }
}

const Mollifier& Mollifier::standard() {
  static const Mollifier instance;
  return instance;
}

double Mollifier::operator()(double x) const { return constant_ * unnormalized(x); }

double Mollifier::derivative(double x) const {
  const double s = 1.0 - 4.0 * x * x;
  if (s <= 0.0) return 0.0;
  return constant_ * std::exp(-1.0 / s) * (-8.0 * x / (s * s));
}

double Mollifier::antiderivative(double x) const {
  if (x <= -0.5) return 0.0;
  if (x >= 0.5) return 1.0;
  const int i = std::clamp(static_cast<int>((x + 0.5) / cell_), 0, kCells - 1);
  const double a = -0.5 + i * cell_;
  using G = boost::math::quadrature::gauss<double, 20>;
  return cumulative_[i] + G::integrate([this](double t) { return (*this)(t); }, a, x);
}

}  // namespace orlicz
