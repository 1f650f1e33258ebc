#pragma once

// Test forms on the hyperbolic plane in horocyclic coordinates
// (ds^2 = e^{2z} dy^2 + dz^2, dA = e^z dy dz): f = h1(y) k(z), g = h2(y) k(z)
// with df ^ dg >= 0 supported in {|y| <= 1, 0 <= z <= 1}, the wedge pairing,
// Orlicz membership profiles along z, and Gram matrices of y-translates.

#include <vector>

#include <Eigen/Dense>

#include "orlicz/measure.hpp"
#include "orlicz/nfunction.hpp"

namespace orlicz::hyperbolic {

/// Building blocks: h1 = theta(y - 1/4), h2 = theta(y + 1/4), k(z) = Theta(2z - 1).
double h1(double y);
double h1_prime(double y);
double h2(double y);
double h2_prime(double y);
double k(double z);
double k_prime(double z);

/// Integral of h1' h2 over the line; equals the unnormalized pairing of df, dg.
double pairing_normalization();

/// f and g after the global rescaling of f that makes the pairing equal 1.
double f_value(double y, double z);
double g_value(double y, double z);

struct FgForms {
  DomainPtr domain;
  SampledForm f;
  SampledForm g;
  SampledForm df;
  SampledForm dg;
  double normalization = 1.0;
};

/// Samples f, g and their differentials (analytic derivatives, orthonormal
/// coframe) on HALF_STRIP(|y| <= y_half_width, 0 <= z <= z_max).
FgForms build_fg(Resolution resolution, double z_max, double y_half_width = 1.0);

struct ShiftedPair {
  SampledForm alpha;  // df translated by `shift` in y
  SampledForm gamma;  // dg translated by `shift` in y
};
ShiftedPair sample_shifted(const DomainPtr& domain, double alpha_shift, double gamma_shift);

/// Integral of alpha ^ gamma over the domain.
double pairing(const SampledForm& alpha, const SampledForm& gamma);

struct MembershipProfile {
  std::vector<double> cuts;
  std::vector<double> partial;  ///< rho_Phi(scale * form) over {z <= cut}
  bool converges = false;
  bool condition_a = false;
  bool agrees = false;
  double limit = 0.0;
};

/// Partial modulars by z-cut.  Declared convergent when the last increments
/// vanish or shrink geometrically (each successive ratio <= 0.9).
MembershipProfile membership_profile(const NFunction& nf, const SampledForm& form, std::vector<double> z_cuts,
                                     double scale = 1.0);

struct GramOptions {
  int cells_per_unit = 32;
  double z_max = 12.0;
  double rank_tol = 1e-9;
};

struct GramResult {
  Eigen::MatrixXd gram;
  int rank = 0;
  std::vector<MembershipProfile> alpha_membership;   ///< alpha_i in L^{Phi2}
  std::vector<MembershipProfile> gamma_membership1;  ///< gamma_j in L^{Psi1}
  std::vector<MembershipProfile> gamma_membership2;  ///< gamma_j in L^{Psi2}
  bool certificate_available = false;  ///< condition (A) for Phi2, Psi1, Psi2
  bool memberships_ok = false;
  bool certified = false;
};

GramResult gram_shifts(int count, double shift, const NFunction& phi1, const NFunction& phi2,
                       const GramOptions& options = {});

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9);

}  // namespace orlicz::hyperbolic
