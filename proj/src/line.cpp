#include "orlicz/line.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "orlicz/mollifier.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/orlicz_norm.hpp"

namespace orlicz::line {

double plateau_value(double a, double x) {
  const Mollifier& theta = Mollifier::standard();
  return theta.antiderivative(x - 0.5) - theta.antiderivative(x - a - 0.5);
}

double plateau_derivative(double a, double x) {
  const Mollifier& theta = Mollifier::standard();
  return theta(x - 0.5) - theta(x - a - 0.5);
}

Plateau plateau(double a, int cells_per_unit, bool half_line) {
  if (!(a > 1.0)) throw std::invalid_argument("plateau: a must exceed 1");
  if (cells_per_unit < 2) throw std::invalid_argument("plateau: resolution must be at least 2 cells per unit");
  const double x_max = a + 2.0;
  const double x_min = half_line ? 0.0 : -x_max;
  const auto cells = static_cast<std::size_t>(std::ceil((x_max - x_min) * cells_per_unit));
  auto dom = make_domain(Interval{x_min, x_max}, {cells, 1});
  auto f = SampledForm::scalar(dom, [a](const Point& p) { return plateau_value(a, p[0]); });
  auto df = SampledForm::sample(dom, 1, [a](const Point& p, std::span<double> out) {
    out[0] = plateau_derivative(a, p[0]);
  });
  return Plateau{a, std::move(f), std::move(df), Mollifier::standard().max()};
}

double blowup_lower_bound(const NFunction& phi1, const NFunction& phi2, double a, double lipschitz) {
  if (!(a > 1.0)) throw std::invalid_argument("blowup_lower_bound: a must exceed 1");
  return phi2.inverse(0.5) / (lipschitz * phi1.inverse(1.0 / (a - 1.0)));
}

std::vector<BlowupRow> blowup_certificate(const NFunction& phi1, const NFunction& phi2, std::span<const double> a_list,
                                          int cells_per_unit, bool half_line) {
  std::vector<BlowupRow> rows;
  rows.reserve(a_list.size());
  for (double a : a_list) {
    const Plateau pl = plateau(a, cells_per_unit, half_line);
    BlowupRow row;
    row.a = a;
    row.lower_bound = blowup_lower_bound(phi1, phi2, a, pl.lipschitz);
    row.gauge_f = luxemburg_norm(phi1, pl.f);
    row.gauge_df = luxemburg_norm(phi2, pl.df);
    row.ratio = row.gauge_f / row.gauge_df;
    rows.push_back(row);
  }
  return rows;
}

double loglog_slope(std::span<const BlowupRow> rows) {
  if (rows.size() < 2) throw std::invalid_argument("loglog_slope: need at least two rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(r.a);
    const double y = std::log(r.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double staircase_root(const NFunction& phi2, int m, double c_m) {
  if (m <= 0) throw std::invalid_argument("staircase: m must be positive");
  if (c_m == 0.0) return 0.0;
  const double target = 1.0 / (m * std::abs(c_m));
  return solve_increasing([&phi2](double t) { return phi2(t) / t; }, target);
}

double staircase_half_width(const NFunction& phi2, int m, double c_m) {
  if (c_m == 0.0) return 0.0;
  const double eps = staircase_root(phi2, m, c_m) / m;
  return std::abs(c_m) / (2.0 * eps);
}

namespace {

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

StaircaseResult staircase(const SampledForm& omega, int m, const NFunction& phi2, bool half_line) {
  if (m <= 0) throw std::invalid_argument("staircase: m must be positive");
  if (omega.degree() != 1 || !std::holds_alternative<Interval>(omega.domain().geometry())) {
    throw std::invalid_argument("staircase: omega must be a 1-form on an INTERVAL");
  }
  const WeightedDomain& dom = omega.domain();
  const auto& iv = std::get<Interval>(dom.geometry());
  const double h = dom.spacing(0);
  const std::size_t n = dom.size();
  const double window_lo = half_line ? 0.0 : -static_cast<double>(m);
  const double window_hi = static_cast<double>(m);
  if (iv.a > window_lo || iv.b < window_hi) {
    throw std::domain_error("staircase: domain does not cover the window [-m, m]");
  }

  std::vector<double> inside(n);
  std::vector<double> outside(n);
  CompensatedSum c_acc;
  for (std::size_t p = 0; p < n; ++p) {
    const double x = dom.points()[p][0];
    const double frac = overlap(x - 0.5 * h, x + 0.5 * h, window_lo, window_hi) / h;
    const double a = omega.component(0)[p];
    inside[p] = frac * a;
    outside[p] = a - inside[p];
    c_acc.add(inside[p] * dom.weights()[p]);
  }

  StaircaseResult res{.m = m,
                      .c_m = c_acc.value(),
                      .t_m = 0.0,
                      .eps_m = 0.0,
                      .lambda_m = SampledForm::zero(omega.domain_ptr(), 1),
                      .b_m = SampledForm::zero(omega.domain_ptr(), 0),
                      .lambda_norm = 0.0,
                      .residual = 0.0,
                      .tail_norm = luxemburg_norm(phi2, outside, dom.weights()),
                      .delta2_warning = !growth_class(phi2, log_grid(1e-3, 1e3, 61)).delta2_holds};

  std::vector<double> lambda_bar(n, 0.0);
  if (res.c_m != 0.0) {
    res.t_m = staircase_root(phi2, m, res.c_m);
    res.eps_m = res.t_m / m;
    const double length = std::abs(res.c_m) / res.eps_m;
    const double lo = half_line ? 0.0 : -0.5 * length;
    const double hi = lo + length;
    if (iv.a > lo || iv.b < hi) {
      throw std::domain_error("staircase: domain does not cover the support of lambda_m");
    }
    const double value = std::copysign(res.eps_m, res.c_m);
    const auto cells = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(length / h)));
    auto support = make_domain(Interval{lo, hi}, {cells, 1});
    res.lambda_m = SampledForm::sample(support, 1, [value](const Point&, std::span<double> out) { out[0] = value; });
    res.lambda_norm = luxemburg_norm(phi2, res.lambda_m);
    for (std::size_t p = 0; p < n; ++p) {
      const double x = dom.points()[p][0];
      lambda_bar[p] = value * overlap(x - 0.5 * h, x + 0.5 * h, lo, hi) / h;
    }
  }

  // b_m sampled at cell midpoints: running integral of chi a - lambda.
  std::vector<double> b(n);
  CompensatedSum running;
  for (std::size_t p = 0; p < n; ++p) {
    const double g = (inside[p] - lambda_bar[p]) * h;
    b[p] = running.value() + 0.5 * g;
    running.add(g);
  }
  res.b_m = SampledForm(omega.domain_ptr(), 0, {std::move(b)});
  res.residual = luxemburg_norm(phi2, d(res.b_m) - omega);
  return res;
}

}  // namespace orlicz::line
