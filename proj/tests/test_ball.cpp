#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orlicz/ball.hpp"
#include "orlicz/orlicz_norm.hpp"

using namespace orlicz;

namespace {

DomainPtr grid(std::size_t n, double radius = 1.0) { return make_domain(DiskGrid{radius}, {n, n}); }

SampledForm one_form(const DomainPtr& dom, double (*a)(const Point&), double (*b)(const Point&)) {
  return SampledForm::sample(dom, 1, [a, b](const Point& p, std::span<double> out) {
    out[0] = a(p);
    out[1] = b(p);
  });
}

double max_abs_diff(const SampledForm& f, std::size_t comp, double (*g)(const Point&)) {
  double worst = 0.0;
  for (std::size_t p = 0; p < f.domain().size(); ++p) {
    worst = std::max(worst, std::abs(f.component(comp)[p] - g(f.domain().points()[p])));
  }
  return worst;
}

double sup_abs(const SampledForm& f) {
  double m = 0.0;
  for (std::size_t c = 0; c < f.component_count(); ++c)
    for (double v : f.component(c)) m = std::max(m, std::abs(v));
  return m;
}

double gauss_bump(const Point& p) { return std::exp(-3.0 * (p[0] * p[0] + p[1] * p[1])); }

}  // namespace

TEST_CASE("cone homotopy of constant and rotation forms") {
  const auto dom = grid(48);
  const auto dx1 = one_form(dom, [](const Point&) { return 1.0; }, [](const Point&) { return 0.0; });
  const Point y{0.2, -0.1};
  const auto k = ball::cone_homotopy(dx1, y);
  CHECK(k.degree() == 0);
  CHECK(max_abs_diff(k, 0, [](const Point& p) { return p[0] - 0.2; }) < 1e-12);

  const auto rot = one_form(dom, [](const Point& p) { return p[1]; }, [](const Point& p) { return -p[0]; });
  CHECK(sup_abs(ball::cone_homotopy(rot, Point{0.0, 0.0})) < 1e-12);

  const auto t = ball::averaged_T(dx1);
  CHECK(max_abs_diff(t, 0, [](const Point& p) { return p[0]; }) < 1e-12);

  const auto zero1 = SampledForm::zero(dom, 1);
  CHECK(sup_abs(ball::cone_homotopy(zero1, y)) == 0.0);
  CHECK(sup_abs(ball::averaged_T(zero1)) == 0.0);
  CHECK(ball::homotopy_residual(zero1, NFunction::power(2.0)) == 0.0);

  const auto zero2 = SampledForm::zero(dom, 2);
  const auto t2 = ball::averaged_T(zero2);
  CHECK(t2.degree() == 1);
  CHECK(sup_abs(t2) == 0.0);

  CHECK_THROWS(ball::cone_homotopy(SampledForm::zero(dom, 0), y));
  CHECK_THROWS(ball::averaged_T(SampledForm::zero(dom, 0)));
  CHECK_THROWS(ball::cone_homotopy(dx1, Point{1.5, 0.0}));
}

TEST_CASE("centre rule") {
  const auto& rule = ball::default_center_rule();
  CHECK(rule.centers.size() == 12);
  double total = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t j = 0; j < rule.centers.size(); ++j) {
    CHECK(rule.weights[j] > 0.0);
    CHECK(std::hypot(rule.centers[j][0], rule.centers[j][1]) < rule.core_radius);
    total += rule.weights[j];
    mx += rule.weights[j] * rule.centers[j][0];
    my += rule.weights[j] * rule.centers[j][1];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(mx) < 1e-15);
  CHECK(std::abs(my) < 1e-15);
  CHECK(rule.density_max > 0.0);
}

TEST_CASE("exactness on affine data") {
  const auto dom = grid(64);
  const auto p2 = NFunction::power(2.0);
  const auto dx1 = one_form(dom, [](const Point&) { return 1.0; }, [](const Point&) { return 0.0; });
  CHECK(ball::homotopy_residual(dx1, p2) <= 1e-10);
  const auto closed = one_form(dom, [](const Point& p) { return p[1]; }, [](const Point& p) { return p[0]; });
  const auto t = ball::averaged_T(closed);
  // T d(x1 x2) = x1 x2 - (x1 x2 averaged over the centres) = x1 x2 for a symmetric rule.
  CHECK(max_abs_diff(t, 0, [](const Point& p) { return p[0] * p[1]; }) < 1e-12);
}

TEST_CASE("homotopy identity over the battery") {
  const auto p2 = NFunction::power(2.0);
  std::vector<double> coarse, fine;
  for (std::size_t n : {64, 128}) {
    const auto battery = ball::homotopy_battery(grid(n));
    CHECK(battery.size() == 10);
    int ones = 0, twos = 0;
    for (const auto& b : battery) {
      CAPTURE(b.name);
      b.form.degree() == 1 ? ++ones : ++twos;
      const double r = ball::homotopy_residual(b.form, p2);
      CHECK(r <= 5e-2);
      (n == 64 ? coarse : fine).push_back(r);
      CHECK(ball::averaged_T(b.form).degree() == b.form.degree() - 1);
    }
    CHECK(ones == 7);
    CHECK(twos == 3);
  }
  // First-order refinement wherever the residual sits above roundoff.
  CHECK(*std::max_element(coarse.begin(), coarse.end()) / *std::max_element(fine.begin(), fine.end()) >= 1.8);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (coarse[i] > 1e-10) CHECK(coarse[i] / fine[i] >= 1.8);
  }
}

TEST_CASE("polar input is resampled") {
  auto polar = make_domain(Disk{1.0}, {48, 96});
  const auto dx1 = SampledForm::sample(polar, 1, [](const Point& p, std::span<double> out) {
    out[0] = std::cos(p[1]);
    out[1] = -std::sin(p[1]);
  });
  const auto cart = ball::to_disk_grid(dx1);
  CHECK(std::holds_alternative<DiskGrid>(cart.domain().geometry()));
  CHECK(max_abs_diff(cart, 0, [](const Point&) { return 1.0; }) < 1e-6);
  CHECK(max_abs_diff(cart, 1, [](const Point&) { return 0.0; }) < 1e-6);
  const auto t = ball::averaged_T(dx1);
  CHECK(max_abs_diff(t, 0, [](const Point& p) { return p[0]; }) < 1e-5);
  const auto same = ball::to_disk_grid(cart);
  CHECK(same.domain().same_as(cart.domain()));
}

TEST_CASE("Poincare solve") {
  const auto dom = grid(128);
  const auto p2 = NFunction::power(2.0);
  const auto area = SampledForm::sample(dom, 2, [](const Point&, std::span<double> out) { out[0] = 1.0; });
  const auto sol = ball::poincare_solve(area, p2);
  CHECK(sol.theta.degree() == 1);
  CHECK(sol.residual <= 5e-2);
  CHECK(sol.ratio <= sol.bound);

  const auto b = SampledForm::scalar(dom, gauss_bump);
  const auto db = d(b);
  const auto prim = ball::poincare_solve(db, p2);
  CHECK(prim.residual <= 5e-2);
  CHECK(luxemburg_norm(p2, d(prim.theta - b)) <= 5e-2 * luxemburg_norm(p2, db));

  const auto zero = ball::poincare_solve(SampledForm::zero(dom, 1), p2);
  CHECK(sup_abs(zero.theta) == 0.0);
  CHECK(zero.ratio == 0.0);

  const auto rot = one_form(dom, [](const Point& p) { return p[1]; }, [](const Point& p) { return -p[0]; });
  CHECK_THROWS_AS(ball::poincare_solve(rot, p2), std::invalid_argument);
}

TEST_CASE("Riesz bound") {
  const auto& rule = ball::default_center_rule();
  const double c = ball::kernel_constant(rule, 1.0);
  CHECK(c == doctest::Approx(rule.density_max * 2.25 / 2.0));
  CHECK(ball::riesz_bound(NFunction::power(2.0), 1.0) == doctest::Approx(4.0 * std::numbers::pi * c).epsilon(1e-15));
  CHECK(ball::riesz_bound(NFunction::power(3.0), 1.0) == ball::riesz_bound(NFunction::power(2.0), 1.0));
  // Linear in the diameter once the kernel constant is held fixed.
  CHECK(ball::riesz_bound(NFunction::power(2.0), 2.0) / ball::kernel_constant(rule, 2.0) ==
        doctest::Approx(2.0 * ball::riesz_bound(NFunction::power(2.0), 1.0) / c));
  const auto dom = grid(32);
  CHECK(ball::riesz_bound(NFunction::power(2.0), *dom) == ball::riesz_bound(NFunction::power(2.0), 1.0));

  // Operator bound for every battery form and several growth rates.
  for (std::size_t n : {64, 128}) {
    const auto battery = ball::homotopy_battery(grid(n));
    for (const auto& nf : {NFunction::power(1.5), NFunction::power(2.0), NFunction::power(3.0), NFunction::expm(1.0)}) {
      const double bound = ball::riesz_bound(nf, 1.0);
      for (const auto& b : battery) {
        CAPTURE(b.name);
        CHECK(luxemburg_norm(nf, ball::averaged_T(b.form)) <= bound * luxemburg_norm(nf, b.form));
      }
    }
  }
}

TEST_CASE("pointwise kernel bound") {
  const auto dom = grid(32);
  const auto battery = ball::homotopy_battery(dom);
  const double c = ball::kernel_constant(ball::default_center_rule(), 1.0);
  for (const auto& b : battery) {
    CAPTURE(b.name);
    const auto t = ball::averaged_T(b.form);
    const auto pot = ball::riesz_potential(b.form);
    int violations = 0;
    for (std::size_t p = 0; p < dom->size(); ++p) {
      if (t.modulus(p) > c * pot[p] * (1 + 1e-12)) ++violations;
    }
    CHECK(violations == 0);
  }
  CHECK_THROWS(ball::riesz_potential(SampledForm::zero(make_domain(Disk{1.0}, {8, 8}), 1)));
}

TEST_CASE("closed-battery ratio is stable under refinement") {
  const auto p2 = NFunction::power(2.0);
  const auto sup_ratio = [&p2](std::size_t n) {
    double best = 0.0;
    for (const auto& b : ball::homotopy_battery(grid(n))) {
      if (b.closed) best = std::max(best, ball::poincare_solve(b.form, p2).ratio);
    }
    return best;
  };
  const double coarse = sup_ratio(64);
  const double fine = sup_ratio(128);
  CHECK(std::isfinite(fine));
  CHECK(fine == doctest::Approx(coarse).epsilon(0.1));
}

TEST_CASE("degree zero: constants are the only closed functions") {
  const auto dom = grid(64);
  const auto c = SampledForm::scalar(dom, [](const Point&) { return 2.5; });
  CHECK(sup_abs(d(c)) == 0.0);
  const auto x1 = SampledForm::scalar(dom, [](const Point& p) { return p[0]; });
  CHECK(luxemburg_norm(NFunction::power(2.0), d(x1)) > 1.0);
  // theta = b - T(db) has d theta = 0 up to discretization, so theta is nearly constant.
  const auto b = SampledForm::scalar(dom, gauss_bump);
  const auto theta = b - ball::averaged_T(d(b));
  double lo = INFINITY, hi = -INFINITY;
  for (double v : theta.component(0)) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo < 5e-2);
}
