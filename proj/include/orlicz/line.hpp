#pragma once

// Constructions on the real line (and the half-line): the plateau family f_a
// whose Sobolev ratio diverges, and the staircase approximation of a 1-form by
// exact differentials.

#include <span>
#include <vector>

#include "orlicz/measure.hpp"
#include "orlicz/nfunction.hpp"

namespace orlicz::line {

/// f_a(x) = Theta(x - 1/2) - Theta(x - a - 1/2) with Theta the mollifier
/// primitive: 1 on [1, a], 0 outside [0, a + 1].
double plateau_value(double a, double x);
double plateau_derivative(double a, double x);

struct Plateau {
  double a = 0.0;
  SampledForm f;
  SampledForm df;
  /// sup |f_a'| = max of the mollifier; independent of a.
  double lipschitz = 0.0;
};

/// Samples f_a and f_a' on [-X, X], X = a + 2 (or [0, X] on the half-line),
/// with `cells_per_unit` midpoint cells per unit length.
Plateau plateau(double a, int cells_per_unit = 32, bool half_line = false);

struct BlowupRow {
  double a = 0.0;
  double lower_bound = 0.0;
  double gauge_f = 0.0;
  double gauge_df = 0.0;
  double ratio = 0.0;
};

/// Phi2^{-1}(1/2) / (L Phi1^{-1}(1/(a-1))).
double blowup_lower_bound(const NFunction& phi1, const NFunction& phi2, double a, double lipschitz);

std::vector<BlowupRow> blowup_certificate(const NFunction& phi1, const NFunction& phi2, std::span<const double> a_list,
                                          int cells_per_unit = 32, bool half_line = false);

/// Least-squares slope of log(ratio) against log(a).
double loglog_slope(std::span<const BlowupRow> rows);

struct StaircaseResult {
  int m = 0;
  double c_m = 0.0;
  double t_m = 0.0;
  double eps_m = 0.0;
  /// eps_m * sign(C_m) on its exact support [-|C_m|/(2 eps_m), |C_m|/(2 eps_m)]
  /// (or [0, |C_m|/eps_m] on the half-line), sampled on that interval.
  SampledForm lambda_m;
  /// b_m(x) = integral of (chi_[-m,m] a - lambda_m) up to x, on the domain of omega.
  SampledForm b_m;
  double lambda_norm = 0.0;
  /// ||d b_m - omega||_(Phi2) on the domain of omega.
  double residual = 0.0;
  /// ||omega||_(Phi2) restricted outside [-m, m].
  double tail_norm = 0.0;
  /// Phi2 failed the Delta_2 classification.
  bool delta2_warning = false;
};

/// Root t of Phi(t)/t = 1/(m |C|).
double staircase_root(const NFunction& phi2, int m, double c_m);

/// Requires omega (a 1-form on an INTERVAL) to cover [-m, m] and the support
/// of lambda_m; throws std::domain_error otherwise.
StaircaseResult staircase(const SampledForm& omega, int m, const NFunction& phi2, bool half_line = false);

/// Half-width of the staircase support, |C| / (2 eps).
double staircase_half_width(const NFunction& phi2, int m, double c_m);

}  // namespace orlicz::line
