#include "orlicz/numeric.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace orlicz {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    correction_ += (sum_ - t) + x;
  } else {
    correction_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

double weighted_sum(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("weighted_sum: size mismatch");
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < values.size(); ++i) acc.add(values[i] * weights[i]);
  return acc.value();
}

double solve_increasing(const std::function<double(double)>& g, double target) {
  if (!(target >= 0.0)) throw std::invalid_argument("solve_increasing: negative target");
  if (target == 0.0) return 0.0;
  if (std::isinf(target)) return target;

  double lo = 0.0;
  double hi = 1.0;
  if (g(hi) < target) {
    lo = hi;
    for (int i = 0; i < 2100 && g(hi) < target; ++i) {
      lo = hi;
      hi *= 2.0;
      if (std::isinf(hi)) throw NonConvergenceError("solve_increasing: bracket overflow");
    }
  } else {
    for (int i = 0; i < 2100; ++i) {
      const double half = hi * 0.5;
      if (half == 0.0) break;
      if (g(half) < target) {
        lo = half;
        break;
      }
      hi = half;
    }
  }
  for (int i = 0; i < 2200; ++i) {
    const double mid = std::midpoint(lo, hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw std::invalid_argument("log_grid: need 0 < lo < hi and count >= 2");
  }
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace orlicz
