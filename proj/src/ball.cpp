#include "orlicz/ball.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orlicz/numeric.hpp"
#include "orlicz/orlicz_norm.hpp"

namespace orlicz::ball {

namespace {

constexpr long kPad = 3;

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// N-point Gauss-Legendre on [a, b].
template <unsigned N>
Rule1D gauss_rule(double a, double b) {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule1D r;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      r.nodes.push_back(mid);
      r.weights.push_back(half * w[i]);
      continue;
    }
    r.nodes.push_back(mid - half * x[i]);
    r.weights.push_back(half * w[i]);
    r.nodes.push_back(mid + half * x[i]);
    r.weights.push_back(half * w[i]);
  }
  return r;
}

const Rule1D& t_rule() {
  static const Rule1D rule = gauss_rule<16>(0.0, 1.0);
  return rule;
}

double disk_radius(const WeightedDomain& dom) {
  if (const auto* g = std::get_if<DiskGrid>(&dom.geometry())) return g->radius;
  if (const auto* g = std::get_if<Disk>(&dom.geometry())) return g->radius;
  throw std::invalid_argument("ball: expected a DISK or DISK_GRID domain");
}

void require_grid(const SampledForm& form) {
  if (!std::holds_alternative<DiskGrid>(form.domain().geometry())) {
    throw std::invalid_argument("ball: expected a DISK_GRID form");
  }
}

// Core of K_y and T: sum_j c_j int_0^1 t^{k-1} w(z; x - y_j, ...) dt.
SampledForm apply_cone(const SampledForm& grid, const std::vector<Point>& centers, const std::vector<double>& coeffs) {
  const int k = grid.degree();
  if (k < 1) throw std::invalid_argument("cone homotopy: degree 0 has no homotopy");
  if (k > 2) throw std::invalid_argument("cone homotopy: degree exceeds dimension");
  const double radius = disk_radius(grid.domain());
  for (const auto& y : centers) {
    if (std::hypot(y[0], y[1]) >= radius) throw std::invalid_argument("cone homotopy: centre outside the disk");
  }
  const GridInterpolator interp(grid);
  const Rule1D& rule = t_rule();
  const WeightedDomain& dom = grid.domain();
  const std::size_t n = dom.size();
  auto out = SampledForm::zero(grid.domain_ptr(), k - 1);
  std::array<double, 2> buf{};
  for (std::size_t p = 0; p < n; ++p) {
    const Point x = dom.cartesian(p);
    double acc0 = 0.0;
    double acc1 = 0.0;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const Point& y = centers[j];
      const double v0 = x[0] - y[0];
      const double v1 = x[1] - y[1];
      double line = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = rule.nodes[i];
        const Point z{t * x[0] + (1.0 - t) * y[0], t * x[1] + (1.0 - t) * y[1]};
        interp.eval(z, buf);
        if (k == 1) {
          line += rule.weights[i] * (buf[0] * v0 + buf[1] * v1);
        } else {
          line += rule.weights[i] * t * buf[0];
        }
      }
      if (k == 1) {
        acc0 += coeffs[j] * line;
      } else {
        acc0 -= coeffs[j] * v1 * line;
        acc1 += coeffs[j] * v0 * line;
      }
    }
    out.mutable_component(0)[p] = acc0;
    if (k == 2) out.mutable_component(1)[p] = acc1;
  }
  return out;
}

double bump_profile(double r) {
  const double s = 1.0 - 4.0 * r * r;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

CenterRule make_default_rule() {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double mass = 2.0 * std::numbers::pi *
                      GK::integrate([](double r) { return bump_profile(r) * r; }, 0.0, 0.5, 20, 1e-15);
  const double c = 1.0 / mass;
  CenterRule rule;
  rule.core_radius = 0.5;
  rule.density_max = c * bump_profile(0.0);
  const Rule1D radial = gauss_rule<3>(0.0, 0.5);
  double total = 0.0;
  for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
    const double r = radial.nodes[i];
    for (int a = 0; a < 4; ++a) {
      const double angle = 0.5 * std::numbers::pi * a;
      rule.centers.push_back({r * std::cos(angle), r * std::sin(angle)});
      const double w = radial.weights[i] * r * c * bump_profile(r) * 0.5 * std::numbers::pi;
      rule.weights.push_back(w);
      total += w;
    }
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

}  // namespace

GridInterpolator::GridInterpolator(const SampledForm& form) {
  require_grid(form);
  const WeightedDomain& dom = form.domain();
  n1_ = static_cast<long>(dom.resolution().n1) + 2 * kPad;
  n2_ = static_cast<long>(dom.resolution().n2) + 2 * kPad;
  u0_ = dom.origin(0);
  v0_ = dom.origin(1);
  h1_ = dom.spacing(0);
  h2_ = dom.spacing(1);
  const std::size_t cells = static_cast<std::size_t>(n1_ * n2_);
  filled_.assign(cells, 0);
  values_.assign(form.component_count(), std::vector<double>(cells, 0.0));
  const auto at = [this](long i, long j) { return static_cast<std::size_t>(i * n2_ + j); };
  for (std::size_t p = 0; p < dom.size(); ++p) {
    const auto [ci, cj] = dom.cell(p);
    const std::size_t idx = at(static_cast<long>(ci) + kPad, static_cast<long>(cj) + kPad);
    filled_[idx] = 1;
    for (std::size_t c = 0; c < values_.size(); ++c) values_[c][idx] = form.component(c)[p];
  }
  const auto inside = [this](long i, long j) { return i >= 0 && i < n1_ && j >= 0 && j < n2_; };
  const auto ok = [&](long i, long j) { return inside(i, j) && filled_[at(i, j)] != 0; };
  static constexpr std::array<std::array<int, 2>, 8> dirs{
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  for (long ring = 0; ring < kPad; ++ring) {
    std::vector<std::pair<std::size_t, std::vector<double>>> updates;
    for (long i = 0; i < n1_; ++i) {
      for (long j = 0; j < n2_; ++j) {
        if (filled_[at(i, j)] != 0) continue;
        std::vector<double> lin(values_.size(), 0.0);
        std::vector<double> near(values_.size(), 0.0);
        int n_lin = 0;
        int n_near = 0;
        for (const auto& dir : dirs) {
          const long i1 = i + dir[0], j1 = j + dir[1];
          if (!ok(i1, j1)) continue;
          ++n_near;
          for (std::size_t c = 0; c < values_.size(); ++c) near[c] += values_[c][at(i1, j1)];
          const long i2 = i + 2 * dir[0], j2 = j + 2 * dir[1];
          if (!ok(i2, j2)) continue;
          ++n_lin;
          for (std::size_t c = 0; c < values_.size(); ++c) {
            lin[c] += 2.0 * values_[c][at(i1, j1)] - values_[c][at(i2, j2)];
          }
        }
        if (n_lin > 0) {
          for (double& v : lin) v /= n_lin;
          updates.emplace_back(at(i, j), std::move(lin));
        } else if (n_near > 0) {
          for (double& v : near) v /= n_near;
          updates.emplace_back(at(i, j), std::move(near));
        }
      }
    }
    for (auto& [idx, vals] : updates) {
      filled_[idx] = 1;
      for (std::size_t c = 0; c < values_.size(); ++c) values_[c][idx] = vals[c];
    }
  }
}

void GridInterpolator::eval(const Point& x, std::span<double> out) const {
  const double fi = (x[0] - u0_) / h1_ - 0.5 + kPad;
  const double fj = (x[1] - v0_) / h2_ - 0.5 + kPad;
  const long i0 = std::clamp(static_cast<long>(std::floor(fi)), 0L, n1_ - 2);
  const long j0 = std::clamp(static_cast<long>(std::floor(fj)), 0L, n2_ - 2);
  const double s = fi - static_cast<double>(i0);
  const double t = fj - static_cast<double>(j0);
  const std::array<std::size_t, 4> idx{static_cast<std::size_t>(i0 * n2_ + j0),
                                       static_cast<std::size_t>((i0 + 1) * n2_ + j0),
                                       static_cast<std::size_t>(i0 * n2_ + j0 + 1),
                                       static_cast<std::size_t>((i0 + 1) * n2_ + j0 + 1)};
  std::array<double, 4> w{(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t};
  double total = 0.0;
  for (int q = 0; q < 4; ++q) {
    if (filled_[idx[q]] == 0) w[q] = 0.0;
    total += w[q];
  }
  if (total != 1.0 && total > 0.0) {
    for (double& v : w) v /= total;
  }
  for (std::size_t c = 0; c < values_.size(); ++c) {
    double v = 0.0;
    for (int q = 0; q < 4; ++q) v += w[q] * values_[c][idx[q]];
    out[c] = v;
  }
}

const CenterRule& default_center_rule() {
  static const CenterRule rule = make_default_rule();
  return rule;
}

SampledForm to_disk_grid(const SampledForm& form) {
  const WeightedDomain& src = form.domain();
  if (std::holds_alternative<DiskGrid>(src.geometry())) return form;
  const auto* disk = std::get_if<Disk>(&src.geometry());
  if (disk == nullptr) throw std::invalid_argument("to_disk_grid: expected a DISK or DISK_GRID form");
  const long nr = static_cast<long>(src.resolution().n1);
  const std::size_t cells = 2 * static_cast<std::size_t>(nr);
  auto dst = make_domain(DiskGrid{disk->radius}, {cells, cells});

  // Cartesian components at the polar nodes.
  std::vector<std::vector<double>> cart(form.component_count(), std::vector<double>(src.size()));
  for (std::size_t p = 0; p < src.size(); ++p) {
    if (form.degree() == 1) {
      const double th = src.points()[p][1];
      const double cr = form.component(0)[p];
      const double ct = form.component(1)[p];
      cart[0][p] = std::cos(th) * cr - std::sin(th) * ct;
      cart[1][p] = std::sin(th) * cr + std::cos(th) * ct;
    } else {
      for (std::size_t c = 0; c < cart.size(); ++c) cart[c][p] = form.component(c)[p];
    }
  }
  const double hr = src.spacing(0);
  const double ht = src.spacing(1);
  return SampledForm::sample(dst, form.degree(), [&](const Point& x, std::span<double> out) {
    const double r = std::hypot(x[0], x[1]);
    double th = std::atan2(x[1], x[0]);
    if (th < 0.0) th += 2.0 * std::numbers::pi;
    const double fi = r / hr - 0.5;
    const long i0 = std::clamp(static_cast<long>(std::floor(fi)), 0L, nr - 2);
    const double s = fi - static_cast<double>(i0);
    const double fj = th / ht - 0.5;
    const long j0 = static_cast<long>(std::floor(fj));
    const double t = fj - static_cast<double>(j0);
    const auto node = [&](long i, long j) { return *src.index(i, j); };
    const std::size_t a = node(i0, j0), b = node(i0 + 1, j0), c = node(i0, j0 + 1), e = node(i0 + 1, j0 + 1);
    for (std::size_t q = 0; q < cart.size(); ++q) {
      const auto& v = cart[q];
      out[q] = (1.0 - s) * (1.0 - t) * v[a] + s * (1.0 - t) * v[b] + (1.0 - s) * t * v[c] + s * t * v[e];
    }
  });
}

SampledForm cone_homotopy(const SampledForm& form, const Point& y) {
  if (form.degree() < 1) throw std::invalid_argument("cone_homotopy: degree 0 has no homotopy");
  return apply_cone(to_disk_grid(form), {y}, {1.0});
}

SampledForm averaged_T(const SampledForm& form, const CenterRule& rule) {
  if (form.degree() < 1) throw std::invalid_argument("averaged_T: degree 0 has no homotopy");
  return apply_cone(to_disk_grid(form), rule.centers, rule.weights);
}

double homotopy_residual(const SampledForm& form, const NFunction& nf, const CenterRule& rule) {
  const SampledForm grid = to_disk_grid(form);
  const double base = luxemburg_norm(nf, grid);
  if (base == 0.0) return 0.0;
  SampledForm r = grid - d(averaged_T(grid, rule));
  if (grid.degree() < grid.domain().dim()) r -= averaged_T(d(grid), rule);
  return luxemburg_norm(nf, r) / base;
}

PoincareResult poincare_solve(const SampledForm& form, const NFunction& nf, const CenterRule& rule) {
  const SampledForm grid = to_disk_grid(form);
  PoincareResult res{SampledForm::zero(grid.domain_ptr(), std::max(grid.degree() - 1, 0)), 0.0, 0.0,
                     riesz_bound(nf, grid.domain(), rule)};
  if (grid.degree() < 1) throw std::invalid_argument("poincare_solve: degree 0 has no primitive");
  const double base = luxemburg_norm(nf, grid);
  if (base == 0.0) return res;
  if (grid.degree() < grid.domain().dim()) {
    const double closed = luxemburg_norm(nf, d(grid)) / base;
    if (closed > 0.1) {
      throw std::invalid_argument("poincare_solve: input is not closed (||dw|| / ||w|| = " + std::to_string(closed) +
                                  " > 0.1)");
    }
  }
  res.theta = averaged_T(grid, rule);
  res.residual = luxemburg_norm(nf, d(res.theta) - grid) / base;
  res.ratio = luxemburg_norm(nf, res.theta) / base;
  return res;
}

double kernel_constant(const CenterRule& rule, double radius) {
  const double reach = radius + rule.core_radius;
  return rule.density_max * reach * reach / 2.0;
}

double riesz_bound(const NFunction&, double radius, const CenterRule& rule) {
  return kernel_constant(rule, radius) * 2.0 * std::numbers::pi * (2.0 * radius);
}

double riesz_bound(const NFunction& nf, const WeightedDomain& domain, const CenterRule& rule) {
  return riesz_bound(nf, disk_radius(domain), rule);
}

std::vector<double> riesz_potential(const SampledForm& form) {
  require_grid(form);
  const WeightedDomain& dom = form.domain();
  const auto mod = form.modulus_field();
  const auto w = dom.weights();
  const auto pts = dom.points();
  const double self = 4.0 * dom.spacing(0) * std::log1p(std::numbers::sqrt2);
  std::vector<double> out(dom.size());
  for (std::size_t p = 0; p < dom.size(); ++p) {
    CompensatedSum acc;
    for (std::size_t q = 0; q < dom.size(); ++q) {
      if (q == p) continue;
      acc.add(w[q] * mod[q] / std::hypot(pts[p][0] - pts[q][0], pts[p][1] - pts[q][1]));
    }
    out[p] = acc.value() + self * mod[p];
  }
  return out;
}

std::vector<BatteryForm> homotopy_battery(const DomainPtr& domain) {
  if (!std::holds_alternative<DiskGrid>(domain->geometry())) {
    throw std::invalid_argument("homotopy_battery: expected a DISK_GRID domain");
  }
  const double radius = disk_radius(*domain);
  const double inv2 = 1.0 / (radius * radius);
  // b = exp(-3 |x|^2 / R^2), analytic so the ray quadrature stays spectral.
  const auto bump = [inv2](const Point& x, double& bx, double& by) {
    const double b = std::exp(-3.0 * (x[0] * x[0] + x[1] * x[1]) * inv2);
    bx = -6.0 * inv2 * x[0] * b;
    by = -6.0 * inv2 * x[1] * b;
    return b;
  };
  const auto gauss = [radius](const Point& x) {
    return std::exp(-(x[0] * x[0] + x[1] * x[1]) / (radius * radius));
  };
  std::vector<BatteryForm> out;
  const auto one = [&](std::string name, bool closed, auto f) {
    out.push_back({std::move(name), SampledForm::sample(domain, 1, f), closed});
  };
  const auto two = [&](std::string name, auto f) {
    out.push_back({std::move(name), SampledForm::sample(domain, 2, f), true});
  };
  one("dx1", true, [](const Point&, std::span<double> o) {
    o[0] = 1.0;
    o[1] = 0.0;
  });
  one("bump_rotation", false, [&](const Point& x, std::span<double> o) {
    double bx, by;
    const double b = bump(x, bx, by);
    o[0] = b * x[1];
    o[1] = -b * x[0];
  });
  one("bump_dx2", false, [&](const Point& x, std::span<double> o) {
    double bx, by;
    const double b = bump(x, bx, by);
    o[0] = 0.0;
    o[1] = b * (1.0 + x[0] * x[0]);
  });
  one("d(x1x2)", true, [](const Point& x, std::span<double> o) {
    o[0] = x[1];
    o[1] = x[0];
  });
  one("d(bump_x1)", true, [&](const Point& x, std::span<double> o) {
    double bx, by;
    const double b = bump(x, bx, by);
    o[0] = b + x[0] * bx;
    o[1] = x[0] * by;
  });
  one("bump_quadratic", false, [&](const Point& x, std::span<double> o) {
    double bx, by;
    const double b = bump(x, bx, by);
    o[0] = b * x[0] * x[1];
    o[1] = b * x[1] * x[1];
  });
  one("gauss_mixed", false, [&](const Point& x, std::span<double> o) {
    const double g = gauss(x);
    o[0] = g * x[0];
    o[1] = 2.0 * g;
  });
  two("area", [](const Point&, std::span<double> o) { o[0] = 1.0; });
  two("bump_area", [&](const Point& x, std::span<double> o) {
    double bx, by;
    o[0] = bump(x, bx, by) * (1.0 + x[0]);
  });
  two("gauss_area", [&](const Point& x, std::span<double> o) { o[0] = (x[0] * x[0] - x[1] + 0.5) * gauss(x); });
  return out;
}

}  // namespace orlicz::ball
