#pragma once

// Finite-dimensional cochain complexes with Euclidean or Orlicz level norms:
// cohomology dimensions and the best constants for solving d eta = theta
// (bounded inverse of d) and for the Poincare-type inequality
// inf_{zeta in Z} ||xi - zeta|| <= C' ||d xi||.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "orlicz/nfunction.hpp"

namespace orlicz {

enum class NormKind { euclidean, gauge, amemiya };

struct LevelNorm {
  NormKind kind = NormKind::euclidean;
  std::optional<NFunction> nf;  ///< gauge / amemiya only
  std::vector<double> weights;  ///< quadrature weights of the level's samples

  static LevelNorm euclidean() { return {}; }
  static LevelNorm gauge(NFunction nf, std::vector<double> weights);
  static LevelNorm amemiya(NFunction nf, std::vector<double> weights);

  double operator()(const Eigen::VectorXd& v) const;
};

struct FiniteComplex {
  std::vector<Eigen::MatrixXd> boundaries;  ///< d_k : F^k -> F^{k+1}
  std::vector<LevelNorm> norms;             ///< one per level (defaults to Euclidean)

  int levels() const { return static_cast<int>(boundaries.size()) + 1; }
  int dim(int level) const;
  const LevelNorm& norm(int level) const;

  /// Checks shapes and d_{k+1} d_k = 0 (relative tolerance); throws otherwise.
  void validate(double tol = 1e-12) const;
};

struct LevelCohomology {
  int dim_z = 0;
  int dim_b = 0;
  int dim_h = 0;
  int torsion = 0;  ///< always 0 in finite dimensions
};

/// Ranks by SVD with threshold sigma > rank_tol * sigma_max.
std::vector<LevelCohomology> cohomology_dims(const FiniteComplex& c, double rank_tol = 1e-9);

struct SamplingOptions {
  int samples = 32;
  std::uint64_t seed = 42;
  double rank_tol = 1e-9;
  double stationarity_tol = 1e-6;
};

struct ConstantEstimate {
  int level = 0;
  double constant = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  bool exact = false;  ///< closed form (Euclidean levels)
};

/// C_k: sup over unit theta in B^k of min{||eta|| : d eta = theta}.
ConstantEstimate best_solution_constant(const FiniteComplex& c, int k, const SamplingOptions& opt = {});

/// C'_k: sup over xi in F^{k-1} of min_{zeta in Z^{k-1}} ||xi - zeta|| / ||d xi||.
ConstantEstimate poincare_complex_constant(const FiniteComplex& c, int k, const SamplingOptions& opt = {});

struct PrimitiveResult {
  Eigen::VectorXd eta;
  double norm = 0.0;
  bool reachable = false;  ///< theta lies in B^k
};

/// Minimum-norm eta with d_{k-1} eta = theta.
PrimitiveResult min_norm_primitive(const FiniteComplex& c, int k, const Eigen::VectorXd& theta,
                                   const SamplingOptions& opt = {});

/// Discretized de Rham complex of [0, length]: nodal 0-cochains (trapezoid
/// weights) and edge 1-cochains (weight h), d = forward difference / h.
FiniteComplex interval_complex(double length, double h, const std::optional<NFunction>& nf = std::nullopt,
                               NormKind kind = NormKind::gauge);

/// Torsion operationalized: the constant keeps growing by at least
/// `min_factor` across each successive doubling of the truncation.
bool diverges_under_doubling(const std::vector<double>& constants, double min_factor = 1.25);

nlohmann::json complex_to_json(const FiniteComplex& c);
FiniteComplex complex_from_json(const nlohmann::json& j);

}  // namespace orlicz
