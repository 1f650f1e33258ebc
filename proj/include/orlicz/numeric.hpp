#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace orlicz {

/// Raised when an iterative procedure fails to bracket or converge.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Neumaier-compensated accumulator. Summation order is the call order,
/// so results are reproducible for a fixed traversal.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;

/// Weighted sum  sum_i w_i * f_i  with compensated accumulation.
double weighted_sum(std::span<const double> values, std::span<const double> weights);

/// Smallest x >= 0 with g(x) >= target for a nondecreasing g with g(0) <= target.
/// The bracket is grown by doubling (or shrunk by halving) from [0, 1] and then
/// bisected down to adjacent doubles.
double solve_increasing(const std::function<double(double)>& g, double target);

/// Log-spaced grid of `count` points covering [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t count);

}  // namespace orlicz
