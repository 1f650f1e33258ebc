#pragma once

// Averaged cone homotopy on the disk of radius R (n = 2).
//
//   (K_y w)(x) = int_0^1 t^{k-1} w(t x + (1 - t) y; x - y, ...) dt
//   T w        = sum_j c_j K_{y_j} w,   sum_j c_j = 1
//
// Forms are evaluated off-grid by bilinear interpolation on the Cartesian
// lattice.  Polar-disk input is resampled to a Cartesian grid first.

#include <span>
#include <string>
#include <vector>

#include "orlicz/measure.hpp"
#include "orlicz/nfunction.hpp"

namespace orlicz::ball {

/// Bilinear interpolation of a form sampled on a DISK_GRID.  The lattice is
/// padded by linear extrapolation so affine fields are reproduced exactly up
/// to the disk edge.
class GridInterpolator {
 public:
  explicit GridInterpolator(const SampledForm& form);

  std::size_t components() const noexcept { return values_.size(); }
  void eval(const Point& x, std::span<double> out) const;

 private:
  long n1_, n2_;
  double u0_, v0_, h1_, h2_;
  std::vector<std::vector<double>> values_;  // per component, padded lattice
  std::vector<char> filled_;
};

/// Centres y_j with weights c_j from a bump density supported in |y| < core_radius.
struct CenterRule {
  std::vector<Point> centers;
  std::vector<double> weights;
  double core_radius = 0.5;
  double density_max = 0.0;  ///< sup of the continuous density
};

/// 3 radial Gauss nodes on [0, 1/2] times 4 angles, weighted by the
/// normalized bump exp(-1 / (1 - 4 |y|^2)).
const CenterRule& default_center_rule();

/// Resamples a polar-disk form to a DISK_GRID with 2 * n_r cells per axis;
/// DISK_GRID input is returned unchanged.
SampledForm to_disk_grid(const SampledForm& form);

/// K_y w.  Throws for degree 0 or a centre outside the disk.
SampledForm cone_homotopy(const SampledForm& form, const Point& y);

SampledForm averaged_T(const SampledForm& form, const CenterRule& rule = default_center_rule());

/// || w - T(dw) - d(Tw) ||_Phi / ||w||_Phi (gauge norms); 0 for w = 0.
double homotopy_residual(const SampledForm& form, const NFunction& nf,
                         const CenterRule& rule = default_center_rule());

struct PoincareResult {
  SampledForm theta;
  double residual = 0.0;  ///< ||d theta - w|| / ||w||
  double ratio = 0.0;     ///< ||theta|| / ||w||
  double bound = 0.0;     ///< riesz_bound
};

/// theta = T w for a numerically closed w; rejects ||dw|| > 0.1 ||w||.
PoincareResult poincare_solve(const SampledForm& form, const NFunction& nf,
                              const CenterRule& rule = default_center_rule());

/// |T w(x)| <= C int |w(z)| / |x - z| dz with
/// C = density_max * (R + core_radius)^2 / 2.
double kernel_constant(const CenterRule& rule, double radius);

/// C * ||1/|x| ||_{L^1(disk of radius diam)} = C * 2 pi * 2R.  Independent of
/// Phi (Young's inequality for convolution).
double riesz_bound(const NFunction& nf, double radius, const CenterRule& rule = default_center_rule());
double riesz_bound(const NFunction& nf, const WeightedDomain& domain, const CenterRule& rule = default_center_rule());

/// Discrete Riesz potential sum_q w_q |f_q| / |x_p - x_q| with the exact
/// self-cell integral 4 h ln(1 + sqrt 2).  O(N^2).
std::vector<double> riesz_potential(const SampledForm& form);

struct BatteryForm {
  std::string name;
  SampledForm form;
  bool closed = false;
};

/// Seven 1-forms and three 2-forms: polynomials times Gaussian bumps.
std::vector<BatteryForm> homotopy_battery(const DomainPtr& domain);

}  // namespace orlicz::ball
