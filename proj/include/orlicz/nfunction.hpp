#pragma once

// N-functions (Young functions): even convex Phi with Phi(0) = 0 that is
// sublinear at the origin and superlinear at infinity.  Five families are
// supported; the complementary function of a non-closed-form family is
// materialized as a TABLE.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace orlicz {

enum class Family { power, scaled_power, plog, expm, table };

std::string to_string(Family family);
Family family_from_string(const std::string& name);

/// Piecewise density table.  On every segment [s_i, s_{i+1}] the density is
///   psi_i + m_i u + c_i u (Delta_i - u),  u = s - s_i,
/// i.e. linear plus a quadratic bubble that is clipped to keep the density
/// nondecreasing.  Node values of the primitive are stored explicitly.
/// Node 0 is always (0, 0).
struct DensityTable {
  std::vector<double> abscissae;
  std::vector<double> density;
  std::vector<double> primitive;
  std::vector<double> bubble;

  /// Piecewise-linear density through the given samples.
  static DensityTable from_samples(std::vector<double> t, std::vector<double> phi);
  /// Density samples together with exact primitive values at the nodes.
  static DensityTable from_nodes(std::vector<double> t, std::vector<double> phi,
                                 std::vector<double> primitive_values);

  double value(double x) const;
  double density_at(double t) const;
};

class NFunction {
 public:
  static NFunction power(double p);
  static NFunction scaled_power(double p, double c);
  static NFunction plog(double p);
  static NFunction expm(double alpha);
  /// Density samples phi(t_i); t strictly increasing and positive, phi nondecreasing.
  static NFunction table(std::vector<double> abscissae, std::vector<double> density);
  /// TABLE with prescribed primitive values at the nodes (serialized form).
  static NFunction table_from_nodes(std::vector<double> abscissae, std::vector<double> density,
                                    std::vector<double> primitive);

  Family family() const noexcept { return family_; }
  std::span<const double> params() const noexcept { return params_; }
  const DensityTable* table_data() const noexcept { return table_.get(); }
  bool closed_form() const noexcept { return family_ != Family::table; }

  /// Phi(x); even in x.
  double operator()(double x) const;
  double eval(double x) const { return (*this)(x); }
  /// Left derivative phi(|t|).
  double density(double t) const;
  /// Positive inverse on [0, inf).  Throws for y < 0.
  double inverse(double y) const;
  /// Complementary N-function Psi(y) = sup_x (x|y| - Phi(x)).
  NFunction conjugate() const;

  std::string name() const;

 private:
  NFunction(Family family, std::vector<double> params, std::shared_ptr<const DensityTable> table = {});

  Family family_;
  std::vector<double> params_;
  std::shared_ptr<const DensityTable> table_;
};

struct GrowthReport {
  double delta2_sup = 0.0;
  bool delta2_holds = false;
  bool nabla2_holds = false;
  std::optional<double> witness_c;
  /// Trend classification from the sample grid alone (used for TABLE).
  bool delta2_empirical = false;
  bool nabla2_empirical = false;
};

/// Delta_2 / nabla_2 classification over a positive sample grid.  Closed-form
/// families carry exact flags; TABLE functions use the grid trend: the largest
/// ratio Phi(2x)/Phi(x) over the last decade of the grid may not exceed the
/// largest ratio over the preceding decade by more than 1%.
GrowthReport growth_class(const NFunction& nf, std::span<const double> grid);

struct ConditionA {
  bool converges = false;
  double value = 0.0;
};

/// Integral of Phi(v)/v^2 over (0, 1], computed over dyadic pieces with a
/// geometric tail estimate.
ConditionA condition_a(const NFunction& nf, double quad_tol = 1e-10);

void to_json(nlohmann::json& j, const NFunction& nf);
NFunction nfunction_from_json(const nlohmann::json& j);

}  // namespace orlicz
