#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "complex_fixtures.hpp"
#include "oracles.hpp"
#include "orlicz/complexes.hpp"

using namespace orlicz;

namespace {

FiniteComplex single(const Eigen::MatrixXd& d) {
  FiniteComplex c;
  c.boundaries.push_back(d);
  return c;
}

// 1 / sqrt(smallest nonzero lambda) of D^T W1 D v = lambda W0 v.
double eigen_oracle(const FiniteComplex& c) {
  const Eigen::MatrixXd& d = c.boundaries[0];
  const auto& w0 = c.norm(0).weights;
  const auto& w1 = c.norm(1).weights;
  Eigen::MatrixXd a = d.transpose() * Eigen::Map<const Eigen::VectorXd>(w1.data(), w1.size()).asDiagonal() * d;
  Eigen::MatrixXd b = Eigen::Map<const Eigen::VectorXd>(w0.data(), w0.size()).asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
  const auto& ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-10 * ev(ev.size() - 1)) return 1.0 / std::sqrt(ev(i));
  }
  return 0.0;
}

}  // namespace

TEST_CASE("cohomology of tiny complexes") {
  auto id = cohomology_dims(single(Eigen::MatrixXd::Identity(1, 1)));
  CHECK(id[0].dim_h == 0);
  CHECK(id[1].dim_h == 0);
  auto zero = cohomology_dims(single(Eigen::MatrixXd::Zero(1, 1)));
  CHECK(zero[0].dim_h == 1);
  CHECK(zero[1].dim_h == 1);
  const auto iv = interval_complex(7.0, 1.0);
  CHECK(iv.dim(0) == 8);
  const auto h = cohomology_dims(iv);
  CHECK(h[0].dim_h == 1);
  CHECK(h[1].dim_h == 0);
  fixtures::IntMatrix diff(7, std::vector<std::int64_t>(8, 0));
  for (int i = 0; i < 7; ++i) {
    diff[i][i] = -1;
    diff[i][i + 1] = 1;
  }
  CHECK(oracle::integer_rank(diff) == 7);
  CHECK(h[0].torsion == 0);
}

TEST_CASE("cohomology matches the integer rank oracle") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ic = fixtures::random_complex(rng);
    const auto c = fixtures::to_complex(ic);
    const auto dims = cohomology_dims(c);
    for (std::size_t k = 0; k < ic.dims.size(); ++k) {
      const int rank_k = k < ic.d.size() ? oracle::integer_rank(ic.d[k]) : 0;
      const int rank_prev = k > 0 ? oracle::integer_rank(ic.d[k - 1]) : 0;
      if (k < ic.d.size()) CHECK(rank_k == ic.ranks[k]);
      CHECK(dims[k].dim_z == ic.dims[k] - rank_k);
      CHECK(dims[k].dim_b == rank_prev);
      CHECK(dims[k].dim_h == ic.dims[k] - rank_k - rank_prev);
    }
  }
}

TEST_CASE("d o d != 0 is rejected") {
  FiniteComplex c;
  c.boundaries.push_back(Eigen::MatrixXd::Identity(2, 2));
  c.boundaries.push_back(Eigen::MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_THROWS(cohomology_dims(c));
  FiniteComplex bad_shape;
  bad_shape.boundaries.push_back(Eigen::MatrixXd::Identity(2, 3));
  bad_shape.boundaries.push_back(Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS(bad_shape.validate());
}

TEST_CASE("Euclidean constants") {
  CHECK(best_solution_constant(single(Eigen::MatrixXd::Identity(3, 3)), 1).constant == doctest::Approx(1.0));
  for (double eps : {1.0, 0.1, 0.01}) {
    const auto est = best_solution_constant(single(eps * Eigen::MatrixXd::Identity(4, 4)), 1);
    CHECK(est.exact);
    CHECK(est.constant == doctest::Approx(1.0 / eps).epsilon(1e-9));
  }
  CHECK(poincare_complex_constant(single(Eigen::MatrixXd::Identity(2, 2)), 1).constant == doctest::Approx(1.0));
  Eigen::MatrixXd proj(1, 2);
  proj << 0.0, 1.0;
  CHECK(poincare_complex_constant(single(proj), 1).constant == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS(best_solution_constant(single(proj), 0));
  CHECK_THROWS(best_solution_constant(single(proj), 2));
}

TEST_CASE("scaling covariance") {
  std::mt19937_64 rng(5);
  const auto ic = fixtures::random_complex(rng);
  auto c = fixtures::to_complex(ic);
  for (int k = 1; k < c.levels(); ++k) {
    const double base = best_solution_constant(c, k).constant;
    if (base == 0.0) continue;
    for (double s : {0.5, 2.0}) {
      auto scaled = c;
      scaled.boundaries[k - 1] *= s;
      CHECK(best_solution_constant(scaled, k).constant == doctest::Approx(base / s).epsilon(1e-9));
    }
  }
  const auto nf = NFunction::power(2.0);
  const auto iv = interval_complex(4.0, 0.25, nf);
  const double base = best_solution_constant(iv, 1).constant;
  auto scaled = iv;
  scaled.boundaries[0] *= 2.0;
  CHECK(best_solution_constant(scaled, 1).constant == doctest::Approx(base / 2.0).epsilon(1e-6));
}

TEST_CASE("Orlicz constant of the interval complex") {
  const auto nf = NFunction::power(2.0);
  // Discrete Poincare constant on [0, 1] approaches 1/pi.
  const auto unit = interval_complex(1.0, 1.0 / 256.0, nf);
  const auto est = poincare_complex_constant(unit, 1);
  CHECK_FALSE(est.exact);
  CHECK(est.constant == doctest::Approx(eigen_oracle(unit)).epsilon(1e-6));
  CHECK(std::abs(est.constant * std::numbers::pi - 1.0) < 0.1);

  // The constant grows linearly in the length (slope 1 on log-log).
  std::vector<double> logs_a, logs_c, constants;
  for (double a : {10.0, 20.0, 40.0, 80.0}) {
    const auto c = interval_complex(a, 0.5, nf);
    const double value = best_solution_constant(c, 1).constant;
    CHECK(value == doctest::Approx(eigen_oracle(c)).epsilon(1e-6));
    logs_a.push_back(std::log(a));
    logs_c.push_back(std::log(value));
    constants.push_back(value);
  }
  const double slope = (logs_c.back() - logs_c.front()) / (logs_a.back() - logs_a.front());
  CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(diverges_under_doubling(constants));
  CHECK_FALSE(diverges_under_doubling({1.0, 1.1, 1.15, 1.16}));
}

TEST_CASE("gauge and Amemiya constants agree within a factor two") {
  for (const auto& nf : {NFunction::power(1.5), NFunction::power(3.0), NFunction::plog(2.0)}) {
    CAPTURE(nf.name());
    const auto g = best_solution_constant(interval_complex(3.0, 0.25, nf, NormKind::gauge), 1);
    const auto a = best_solution_constant(interval_complex(3.0, 0.25, nf, NormKind::amemiya), 1);
    CHECK(g.constant > 0.0);
    CHECK(a.constant / g.constant >= 0.5);
    CHECK(a.constant / g.constant <= 2.0);
  }
}

TEST_CASE("sampling is deterministic per seed") {
  const auto c = interval_complex(2.0, 0.25, NFunction::power(3.0));
  SamplingOptions opt;
  opt.seed = 17;
  const auto x = best_solution_constant(c, 1, opt);
  const auto y = best_solution_constant(c, 1, opt);
  CHECK(x.constant == y.constant);
  CHECK(x.seed == 17);
  CHECK(x.samples > 0);
}

TEST_CASE("minimum-norm primitive") {
  const auto c = interval_complex(1.0, 0.125, NFunction::power(2.0));
  Eigen::VectorXd theta = Eigen::VectorXd::Ones(8);
  const auto prim = min_norm_primitive(c, 1, theta);
  CHECK(prim.reachable);
  CHECK((c.boundaries[0] * prim.eta - theta).norm() < 1e-9);
  // The minimizer of the weighted L2 norm is the mean-free primitive x - 1/2.
  double mean = 0.0;
  for (Eigen::Index i = 0; i < prim.eta.size(); ++i) mean += c.norm(0).weights[i] * prim.eta(i);
  CHECK(std::abs(mean) < 1e-6);

  Eigen::MatrixXd d(2, 1);
  d << 1.0, 0.0;
  Eigen::VectorXd unreachable(2);
  unreachable << 0.0, 1.0;
  CHECK_FALSE(min_norm_primitive(single(d), 1, unreachable).reachable);
}

TEST_CASE("complex JSON round trip") {
  const auto c = interval_complex(2.0, 0.5, NFunction::plog(2.0), NormKind::amemiya);
  const auto back = complex_from_json(complex_to_json(c));
  CHECK(back.levels() == 2);
  CHECK((back.boundaries[0] - c.boundaries[0]).norm() == 0.0);
  CHECK(back.norm(1).kind == NormKind::amemiya);
  CHECK(best_solution_constant(back, 1).constant == doctest::Approx(best_solution_constant(c, 1).constant));
  CHECK_THROWS(complex_from_json(nlohmann::json{{"dims", {1, 1}}, {"boundaries", nlohmann::json::array()}}));
}
