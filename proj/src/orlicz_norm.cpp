#include "orlicz/orlicz_norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "orlicz/numeric.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sizes(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw std::invalid_argument("modular: values and weights differ in length");
}

double scaled_modular(const NFunction& nf, std::span<const double> values, std::span<const double> weights,
                      double scale) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (v == 0.0) continue;
    const double term = weights[i] * nf(std::abs(v) * scale);
    if (!std::isfinite(term)) return kInf;
    acc.add(term);
  }
  const double total = acc.value();
  return std::isfinite(total) ? total : kInf;
}

bool all_zero(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

}  // namespace

double modular(const NFunction& nf, std::span<const double> values, std::span<const double> weights) {
  check_sizes(values, weights);
  return scaled_modular(nf, values, weights, 1.0);
}

double modular(const NFunction& nf, const SampledForm& form) {
  const auto mod = form.modulus_field();
  return modular(nf, mod, form.domain().weights());
}

double luxemburg_norm(const NFunction& nf, std::span<const double> values, std::span<const double> weights) {
  check_sizes(values, weights);
  if (all_zero(values)) return 0.0;
  const auto rho = [&](double k) { return scaled_modular(nf, values, weights, 1.0 / k); };

  double lo = 0.0;
  double hi = 1.0;
  if (rho(hi) > 1.0) {
    lo = hi;
    for (;;) {
      hi *= 2.0;
      if (std::isinf(hi)) return kInf;
      if (rho(hi) <= 1.0) break;
      lo = hi;
    }
  } else {
    for (;;) {
      const double half = 0.5 * hi;
      if (half == 0.0) return 0.0;
      if (rho(half) > 1.0) {
        lo = half;
        break;
      }
      hi = half;
    }
  }
  while (hi - lo > 1e-14 && hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (rho(mid) > 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double luxemburg_norm(const NFunction& nf, const SampledForm& form) {
  const auto mod = form.modulus_field();
  return luxemburg_norm(nf, mod, form.domain().weights());
}

double orlicz_norm(const NFunction& nf, std::span<const double> values, std::span<const double> weights) {
  check_sizes(values, weights);
  if (all_zero(values)) return 0.0;
  const double gauge = luxemburg_norm(nf, values, weights);
  if (std::isinf(gauge)) return kInf;

  // h(k) = (1 + rho(k f)) / k is unimodal in k and h(1/gauge) = 2 gauge, so
  // the minimizer lies above 1/(2 gauge).  Scan upward in log k, then refine.
  const auto h = [&](double s) {
    const double k = std::exp(s);
    const double r = scaled_modular(nf, values, weights, k);
    return std::isfinite(r) ? (1.0 + r) / k : kInf;
  };
  constexpr double step = 0.25;
  double s_prev = std::log(0.5 / gauge);
  double h_prev = h(s_prev);
  double s_cur = s_prev + step;
  double h_cur = h(s_cur);
  double s_lo = s_prev;
  int guard = 0;
  while (h_cur < h_prev && guard++ < 4000) {
    s_lo = s_prev;
    s_prev = s_cur;
    h_prev = h_cur;
    s_cur += step;
    h_cur = h(s_cur);
  }
  const auto [arg, value] =
      boost::math::tools::brent_find_minima(h, s_lo, s_cur, std::numeric_limits<double>::digits / 2);
  (void)arg;
  return std::min(value, 2.0 * gauge);
}

double orlicz_norm(const NFunction& nf, const SampledForm& form) {
  const auto mod = form.modulus_field();
  return orlicz_norm(nf, mod, form.domain().weights());
}

double graph_norm(const NFunction& phi_I, const NFunction& phi_II, const SampledForm& form) {
  if (form.degree() >= form.domain().dim()) throw std::invalid_argument("graph_norm: top-degree form");
  return luxemburg_norm(phi_I, form) + luxemburg_norm(phi_II, d(form));
}

double indicator_norm(const NFunction& nf, double measure) {
  if (!(measure > 0.0)) throw std::invalid_argument("indicator_norm: measure must be positive");
  return 1.0 / nf.inverse(1.0 / measure);
}

}  // namespace orlicz
