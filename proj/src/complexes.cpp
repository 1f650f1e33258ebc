#include "orlicz/complexes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "orlicz/orlicz_norm.hpp"

namespace orlicz {

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

const LevelNorm& euclidean_norm() {
  static const LevelNorm norm = LevelNorm::euclidean();
  return norm;
}

int rank_of(const Eigen::MatrixXd& m, double rank_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rank_tol * s(0) ? 1 : 0;
  return r;
}

// Weights turning a level norm into its Euclidean surrogate (exact for
// Phi(x) = x^2 under the gauge norm).
Eigen::VectorXd surrogate_scale(const LevelNorm& norm, int dim) {
  if (norm.kind == NormKind::euclidean) return Eigen::VectorXd::Ones(dim);
  Eigen::VectorXd s(dim);
  for (int i = 0; i < dim; ++i) s(i) = std::sqrt(norm.weights[static_cast<std::size_t>(i)]);
  return s;
}

struct KernelData {
  Eigen::MatrixXd basis;  // columns span ker d
  Eigen::VectorXd singular;
  int rank = 0;
};

KernelData kernel_of(const Eigen::MatrixXd& d, double rank_tol) {
  KernelData out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeFullV);
  out.singular = svd.singularValues();
  const double top = out.singular.size() > 0 ? out.singular(0) : 0.0;
  for (Eigen::Index i = 0; i < out.singular.size(); ++i) out.rank += (top > 0.0 && out.singular(i) > rank_tol * top);
  const Eigen::Index n = d.cols();
  out.basis = svd.matrixV().rightCols(n - out.rank);
  return out;
}

// min over c of ||xi + N c|| for a convex level norm: weighted least-squares
// start, then coordinate descent with Brent line searches on certified brackets.
Eigen::VectorXd minimize_over_kernel(const LevelNorm& norm, const Eigen::VectorXd& xi, const Eigen::MatrixXd& kernel,
                                     double stationarity_tol) {
  if (kernel.cols() == 0) return xi;
  const Eigen::VectorXd scale = surrogate_scale(norm, static_cast<int>(xi.size()));
  const Eigen::MatrixXd sn = scale.asDiagonal() * kernel;
  Eigen::VectorXd c = sn.colPivHouseholderQr().solve(-(scale.asDiagonal() * xi));
  Eigen::VectorXd x = xi + kernel * c;
  if (norm.kind == NormKind::euclidean) {
    // Orthogonal projection is already optimal.
    return xi - kernel * (kernel.transpose() * xi);
  }
  double value = norm(x);
  for (int sweep = 0; sweep < 100; ++sweep) {
    const double before = value;
    for (Eigen::Index i = 0; i < kernel.cols(); ++i) {
      const Eigen::VectorXd dir = kernel.col(i);
      const double dir_norm = norm(dir);
      if (!(dir_norm > 0.0)) continue;
      const double reach = 2.0 * value / dir_norm;
      const auto g = [&](double t) { return norm(x + t * dir); };
      const auto [t, gt] = boost::math::tools::brent_find_minima(g, -reach, reach, 40);
      if (gt < value) {
        x += t * dir;
        value = gt;
      }
    }
    if (before - value <= stationarity_tol * before) break;
  }
  return x;
}

struct Sweep {
  double sup = 0.0;
  int samples = 0;
};

// sup over candidate xi of min_{zeta in ker d} ||xi - zeta||_{k-1} / ||d xi||_k.
Sweep sample_ratio(const FiniteComplex& c, int k, const SamplingOptions& opt) {
  const Eigen::MatrixXd& d = c.boundaries[static_cast<std::size_t>(k - 1)];
  const LevelNorm& src = c.norm(k - 1);
  const LevelNorm& dst = c.norm(k);
  const KernelData ker = kernel_of(d, opt.rank_tol);

  std::vector<Eigen::VectorXd> candidates;
  {
    const Eigen::VectorXd s_src = surrogate_scale(src, c.dim(k - 1));
    const Eigen::VectorXd s_dst = surrogate_scale(dst, c.dim(k));
    const Eigen::MatrixXd a = s_dst.asDiagonal() * d * s_src.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const int r = rank_of(a, opt.rank_tol);
    if (r > 0) {
      for (int j = std::max(0, r - 3); j < r; ++j) {
        candidates.push_back(s_src.cwiseInverse().cwiseProduct(svd.matrixV().col(j)));
      }
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < opt.samples; ++s) {
    Eigen::VectorXd xi(c.dim(k - 1));
    for (Eigen::Index i = 0; i < xi.size(); ++i) xi(i) = normal(rng);
    candidates.push_back(std::move(xi));
  }

  Sweep out;
  for (const auto& xi : candidates) {
    const Eigen::VectorXd theta = d * xi;
    const double theta_norm = dst(theta);
    if (!(theta_norm > 1e-14 * std::max(1.0, src(xi)))) continue;  // xi in the kernel
    const Eigen::VectorXd best = minimize_over_kernel(src, xi, ker.basis, opt.stationarity_tol);
    out.sup = std::max(out.sup, src(best) / theta_norm);
    ++out.samples;
  }
  return out;
}

void check_level(const FiniteComplex& c, int k) {
  if (k < 1 || k >= c.levels()) throw std::invalid_argument("constant: level must satisfy 1 <= k < levels");
}

ConstantEstimate constant_estimate(const FiniteComplex& c, int k, const SamplingOptions& opt) {
  check_level(c, k);
  c.validate();
  ConstantEstimate est;
  est.level = k;
  est.seed = opt.seed;
  const Eigen::MatrixXd& d = c.boundaries[static_cast<std::size_t>(k - 1)];
  if (c.norm(k - 1).kind == NormKind::euclidean && c.norm(k).kind == NormKind::euclidean) {
    const KernelData ker = kernel_of(d, opt.rank_tol);
    est.exact = true;
    est.constant = ker.rank > 0 ? 1.0 / ker.singular(ker.rank - 1) : 0.0;
    return est;
  }
  const Sweep sweep = sample_ratio(c, k, opt);
  est.constant = sweep.sup;
  est.samples = sweep.samples;
  return est;
}

}  // namespace

LevelNorm LevelNorm::gauge(NFunction nf, std::vector<double> weights) {
  return {NormKind::gauge, std::move(nf), std::move(weights)};
}

LevelNorm LevelNorm::amemiya(NFunction nf, std::vector<double> weights) {
  return {NormKind::amemiya, std::move(nf), std::move(weights)};
}

double LevelNorm::operator()(const Eigen::VectorXd& v) const {
  switch (kind) {
    case NormKind::euclidean: return v.norm();
    case NormKind::gauge: return luxemburg_norm(*nf, as_span(v), weights);
    case NormKind::amemiya: return orlicz_norm(*nf, as_span(v), weights);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

int FiniteComplex::dim(int level) const {
  if (boundaries.empty()) throw std::invalid_argument("FiniteComplex: no boundary maps");
  if (level == 0) return static_cast<int>(boundaries.front().cols());
  return static_cast<int>(boundaries.at(static_cast<std::size_t>(level - 1)).rows());
}

const LevelNorm& FiniteComplex::norm(int level) const {
  if (norms.empty()) return euclidean_norm();
  return norms.at(static_cast<std::size_t>(level));
}

void FiniteComplex::validate(double tol) const {
  if (boundaries.empty()) throw std::invalid_argument("FiniteComplex: no boundary maps");
  for (std::size_t k = 0; k + 1 < boundaries.size(); ++k) {
    if (boundaries[k + 1].cols() != boundaries[k].rows()) {
      throw std::invalid_argument("FiniteComplex: boundary shapes do not chain");
    }
    const Eigen::MatrixXd dd = boundaries[k + 1] * boundaries[k];
    const double scale = std::max(1.0, boundaries[k + 1].cwiseAbs().maxCoeff() * boundaries[k].cwiseAbs().maxCoeff() *
                                           static_cast<double>(boundaries[k].rows()));
    if (dd.size() > 0 && dd.cwiseAbs().maxCoeff() > tol * scale) {
      throw std::invalid_argument("FiniteComplex: d o d != 0 at level " + std::to_string(k));
    }
  }
  if (!norms.empty()) {
    if (static_cast<int>(norms.size()) != levels()) throw std::invalid_argument("FiniteComplex: one norm per level");
    for (int l = 0; l < levels(); ++l) {
      const LevelNorm& n = norms[static_cast<std::size_t>(l)];
      if (n.kind == NormKind::euclidean) continue;
      if (!n.nf) throw std::invalid_argument("FiniteComplex: Orlicz level without N-function");
      if (static_cast<int>(n.weights.size()) != dim(l)) {
        throw std::invalid_argument("FiniteComplex: weight count differs from level dimension");
      }
      for (double w : n.weights) {
        if (!(w > 0.0)) throw std::invalid_argument("FiniteComplex: weights must be positive");
      }
    }
  }
}

std::vector<LevelCohomology> cohomology_dims(const FiniteComplex& c, double rank_tol) {
  c.validate();
  const int levels = c.levels();
  std::vector<int> ranks(static_cast<std::size_t>(levels), 0);
  for (int k = 0; k + 1 < levels; ++k) ranks[static_cast<std::size_t>(k)] = rank_of(c.boundaries[k], rank_tol);
  std::vector<LevelCohomology> out;
  for (int k = 0; k < levels; ++k) {
    LevelCohomology h;
    h.dim_z = c.dim(k) - ranks[static_cast<std::size_t>(k)];
    h.dim_b = k == 0 ? 0 : ranks[static_cast<std::size_t>(k - 1)];
    h.dim_h = h.dim_z - h.dim_b;
    if (h.dim_h < 0) throw std::logic_error("cohomology_dims: rank bookkeeping is inconsistent");
    h.torsion = 0;  // B^k is closed in finite dimensions
    out.push_back(h);
  }
  return out;
}

ConstantEstimate best_solution_constant(const FiniteComplex& c, int k, const SamplingOptions& opt) {
  return constant_estimate(c, k, opt);
}

ConstantEstimate poincare_complex_constant(const FiniteComplex& c, int k, const SamplingOptions& opt) {
  // In finite dimensions min ||eta|| over d eta = d xi equals the distance
  // from xi to Z^{k-1}, so both constants come from the same sweep.
  return constant_estimate(c, k, opt);
}

PrimitiveResult min_norm_primitive(const FiniteComplex& c, int k, const Eigen::VectorXd& theta,
                                   const SamplingOptions& opt) {
  check_level(c, k);
  const Eigen::MatrixXd& d = c.boundaries[static_cast<std::size_t>(k - 1)];
  if (theta.size() != d.rows()) throw std::invalid_argument("min_norm_primitive: theta has the wrong size");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(opt.rank_tol);
  const Eigen::VectorXd eta0 = svd.solve(theta);
  PrimitiveResult out;
  const double miss = (d * eta0 - theta).norm();
  out.reachable = miss <= 1e-9 * std::max(1.0, theta.norm());
  const KernelData ker = kernel_of(d, opt.rank_tol);
  out.eta = minimize_over_kernel(c.norm(k - 1), eta0, ker.basis, opt.stationarity_tol);
  out.norm = c.norm(k - 1)(out.eta);
  return out;
}

FiniteComplex interval_complex(double length, double h, const std::optional<NFunction>& nf, NormKind kind) {
  if (!(length > 0.0) || !(h > 0.0) || h > length) throw std::invalid_argument("interval_complex: bad extents");
  const int nodes = static_cast<int>(std::lround(length / h)) + 1;
  const double step = length / (nodes - 1);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(nodes - 1, nodes);
  for (int i = 0; i + 1 < nodes; ++i) {
    d(i, i) = -1.0 / step;
    d(i, i + 1) = 1.0 / step;
  }
  FiniteComplex c;
  c.boundaries.push_back(std::move(d));
  if (nf) {
    std::vector<double> w0(static_cast<std::size_t>(nodes), step);
    w0.front() = w0.back() = 0.5 * step;
    std::vector<double> w1(static_cast<std::size_t>(nodes - 1), step);
    c.norms.push_back({kind, *nf, std::move(w0)});
    c.norms.push_back({kind, *nf, std::move(w1)});
  }
  return c;
}

bool diverges_under_doubling(const std::vector<double>& constants, double min_factor) {
  if (constants.size() < 2) return false;
  for (std::size_t i = 1; i < constants.size(); ++i) {
    if (!(constants[i] >= min_factor * constants[i - 1])) return false;
  }
  return true;
}

nlohmann::json complex_to_json(const FiniteComplex& c) {
  nlohmann::json j;
  std::vector<int> dims;
  for (int l = 0; l < c.levels(); ++l) dims.push_back(c.dim(l));
  j["dims"] = dims;
  j["boundaries"] = nlohmann::json::array();
  for (const auto& d : c.boundaries) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
      std::vector<double> row(static_cast<std::size_t>(d.cols()));
      for (Eigen::Index col = 0; col < d.cols(); ++col) row[static_cast<std::size_t>(col)] = d(r, col);
      rows.push_back(row);
    }
    j["boundaries"].push_back(rows);
  }
  j["norms"] = nlohmann::json::array();
  for (const auto& n : c.norms) {
    nlohmann::json nj;
    nj["kind"] = n.kind == NormKind::euclidean ? "euclidean" : n.kind == NormKind::gauge ? "gauge" : "amemiya";
    if (n.nf) nj["nfunction"] = *n.nf;
    if (!n.weights.empty()) nj["weights"] = n.weights;
    j["norms"].push_back(nj);
  }
  return j;
}

FiniteComplex complex_from_json(const nlohmann::json& j) {
  FiniteComplex c;
  const auto dims = j.at("dims").get<std::vector<int>>();
  const auto& bs = j.at("boundaries");
  if (dims.size() != bs.size() + 1) throw std::invalid_argument("complex JSON: need one more dim than boundaries");
  for (std::size_t k = 0; k < bs.size(); ++k) {
    Eigen::MatrixXd d(dims[k + 1], dims[k]);
    if (static_cast<int>(bs[k].size()) != dims[k + 1]) throw std::invalid_argument("complex JSON: row count");
    for (int r = 0; r < dims[k + 1]; ++r) {
      const auto row = bs[k][static_cast<std::size_t>(r)].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != dims[k]) throw std::invalid_argument("complex JSON: column count");
      for (int col = 0; col < dims[k]; ++col) d(r, col) = row[static_cast<std::size_t>(col)];
    }
    c.boundaries.push_back(std::move(d));
  }
  if (j.contains("norms")) {
    for (const auto& nj : j["norms"]) {
      const std::string kind = nj.at("kind").get<std::string>();
      if (kind == "euclidean") {
        c.norms.push_back(LevelNorm::euclidean());
        continue;
      }
      NormKind nk;
      if (kind == "gauge") {
        nk = NormKind::gauge;
      } else if (kind == "amemiya") {
        nk = NormKind::amemiya;
      } else {
        throw std::invalid_argument("complex JSON: unknown norm kind '" + kind + "'");
      }
      c.norms.push_back({nk, nfunction_from_json(nj.at("nfunction")), nj.at("weights").get<std::vector<double>>()});
    }
  }
  c.validate();
  return c;
}

}  // namespace orlicz
