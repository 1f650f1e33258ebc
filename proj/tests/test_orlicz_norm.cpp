#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "orlicz/measure.hpp"
#include "orlicz/orlicz_norm.hpp"

using namespace orlicz;

namespace {

std::vector<NFunction> families() {
  return {NFunction::power(1.5), NFunction::power(2.0), NFunction::power(3.0), NFunction::scaled_power(2.5, 0.3),
          NFunction::plog(2.0), NFunction::expm(1.0), NFunction::plog(2.0).conjugate()};
}

SampledForm indicator(double length, double value, double a = 0.0) {
  auto dom = make_domain(Interval{a, a + length}, {400, 1});
  return SampledForm::sample(dom, 1, [value](const Point&, std::span<double> o) { o[0] = value; });
}

struct RandomField {
  std::vector<double> values;
  std::vector<double> weights;
};

RandomField random_field(std::mt19937_64& rng, std::size_t n) {
  std::lognormal_distribution<double> mag(0.0, 1.5);
  std::uniform_real_distribution<double> w(0.01, 1.0);
  RandomField f;
  for (std::size_t i = 0; i < n; ++i) {
    f.values.push_back((i % 3 == 0 ? -1.0 : 1.0) * mag(rng));
    f.weights.push_back(w(rng));
  }
  return f;
}

}  // namespace

TEST_CASE("modular examples") {
  const auto p2 = NFunction::power(2.0);
  CHECK(modular(p2, indicator(2.0, 1.0)) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(modular(p2, indicator(1.0, 3.0)) == doctest::Approx(9.0).epsilon(1e-13));
  CHECK(modular(p2, indicator(1.0, 0.0)) == 0.0);
  const double big[] = {1e300};
  const double w[] = {1.0};
  CHECK(std::isinf(modular(NFunction::expm(1.0), big, w)));
  CHECK_THROWS(modular(p2, std::span<const double>(big), std::span<const double>()));
}

TEST_CASE("Luxemburg norm examples") {
  const auto p2 = NFunction::power(2.0);
  CHECK(luxemburg_norm(p2, indicator(4.0, 1.0)) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(luxemburg_norm(p2, indicator(4.0, 0.0)) == 0.0);
  for (double p : {1.5, 2.0, 3.0}) {
    for (double m : {0.3, 1.0, 7.0}) {
      CHECK(luxemburg_norm(NFunction::power(p), indicator(m, 1.0)) == doctest::Approx(std::pow(m, 1.0 / p)).epsilon(1e-9));
    }
  }
  const auto f = indicator(2.5, 1.7);
  for (const auto& nf : families()) {
    CAPTURE(nf.name());
    const double base = luxemburg_norm(nf, f);
    for (double c : {-3.0, 0.25, 10.0}) {
      CHECK(luxemburg_norm(nf, c * f) == doctest::Approx(std::abs(c) * base).epsilon(1e-9));
    }
  }
}

TEST_CASE("indicator closed form against bisection") {
  for (const auto& nf : families()) {
    CAPTURE(nf.name());
    for (double m : {0.05, 0.5, 2.0, 30.0}) {
      CHECK(indicator_norm(nf, m) == doctest::Approx(luxemburg_norm(nf, indicator(m, 1.0))).epsilon(1e-8));
    }
  }
}

TEST_CASE("Amemiya norm") {
  const auto p2 = NFunction::power(2.0);
  for (double m : {0.5, 1.0, 4.0}) {
    CHECK(orlicz_norm(p2, indicator(m, 1.0)) == doctest::Approx(2.0 * std::sqrt(m)).epsilon(1e-8));
  }
  CHECK(orlicz_norm(p2, indicator(1.0, 0.0)) == 0.0);
  const auto chi = indicator(1.0, 1.0);
  CHECK(orlicz_norm(p2, chi) / luxemburg_norm(p2, chi) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("norm axioms on random fields") {
  std::mt19937_64 rng(99);
  for (const auto& nf : families()) {
    CAPTURE(nf.name());
    int triangle = 0, band = 0, unit_ball = 0, order = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      auto f = random_field(rng, 12);
      auto g = random_field(rng, 12);
      g.weights = f.weights;
      std::vector<double> sum(12);
      std::vector<double> dominated(12);
      for (int i = 0; i < 12; ++i) {
        sum[i] = f.values[i] + g.values[i];
        dominated[i] = 0.5 * f.values[i] * (i % 2);
      }
      const double nf_f = luxemburg_norm(nf, f.values, f.weights);
      const double nf_g = luxemburg_norm(nf, g.values, f.weights);
      if (luxemburg_norm(nf, sum, f.weights) > (nf_f + nf_g) * (1 + 1e-9)) ++triangle;
      if (trial % 10 == 0) {
        const double am = orlicz_norm(nf, f.values, f.weights);
        if (am < nf_f * (1 - 1e-8) || am > 2.0 * nf_f * (1 + 1e-8)) ++band;
      }
      std::uniform_real_distribution<double> scale(0.3, 3.0);
      const double s = scale(rng);
      std::vector<double> scaled(12);
      for (int i = 0; i < 12; ++i) scaled[i] = s * f.values[i] / nf_f;
      const bool in_ball = luxemburg_norm(nf, scaled, f.weights) <= 1.0 + 1e-9;
      const double rho = modular(nf, scaled, f.weights);
      if (std::abs(s - 1.0) > 1e-6 && in_ball != (rho <= 1.0)) ++unit_ball;
      if (luxemburg_norm(nf, dominated, f.weights) > nf_f * (1 + 1e-9)) ++order;
    }
    CHECK(triangle == 0);
    CHECK(band == 0);
    CHECK(unit_ball == 0);
    CHECK(order == 0);
  }
}

TEST_CASE("graph norm") {
  const auto p2 = NFunction::power(2.0);
  auto dom = make_domain(Interval{0.0, 1.0}, {1000, 1});
  const auto zero = SampledForm::zero(dom, 0);
  CHECK(graph_norm(p2, p2, zero) == 0.0);
  const auto x = SampledForm::scalar(dom, [](const Point& p) { return p[0]; });
  CHECK(graph_norm(p2, p2, x) == doctest::Approx(std::sqrt(1.0 / 3.0) + 1.0).epsilon(2e-3));
  const auto c = SampledForm::scalar(dom, [](const Point&) { return 2.0; });
  CHECK(graph_norm(p2, p2, c) == doctest::Approx(luxemburg_norm(p2, c)).epsilon(1e-12));
  const auto top = SampledForm::sample(dom, 1, [](const Point&, std::span<double> o) { o[0] = 1.0; });
  CHECK_THROWS(graph_norm(p2, p2, top));
}
