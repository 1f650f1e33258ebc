#pragma once

// Weighted quadrature domains and sampled differential forms on structured
// grids.  Every domain is a tensor lattice in orthogonal coordinates (u, v)
// with scale factors (s1, s2); forms are stored in the orthonormal coframe
// e1 = s1 du, e2 = s2 dv, so the pointwise modulus is the Euclidean norm of
// the stored coefficients.
//
//   INTERVAL(a, b)            u = x                      s1 = 1
//   HALF_STRIP(y, z in [0,Z]) u = y, v = z   dA = e^z dy dz   s1 = e^z, s2 = 1
//   DISK(R), polar            u = r, v = theta            s1 = 1,  s2 = r
//   DISK_GRID(R), Cartesian   u = x1, v = x2 (cells with centre inside the disk)

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace orlicz {

struct Interval {
  double a = 0.0;
  double b = 1.0;
};

struct HalfStrip {
  double y_min = -1.0;
  double y_max = 1.0;
  double z_max = 1.0;

  static HalfStrip symmetric(double y_half_width, double z_max) {
    return {-y_half_width, y_half_width, z_max};
  }
};

struct Disk {
  double radius = 1.0;
};

struct DiskGrid {
  double radius = 1.0;
};

using Geometry = std::variant<Interval, HalfStrip, Disk, DiskGrid>;

struct Resolution {
  std::size_t n1 = 2;
  std::size_t n2 = 1;
};

using Point = std::array<double, 2>;

class WeightedDomain {
 public:
  const Geometry& geometry() const noexcept { return geometry_; }
  Resolution resolution() const noexcept { return resolution_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }

  /// Native coordinates (u, v) of each sample; v is unused in 1-D.
  std::span<const Point> points() const noexcept { return points_; }
  std::span<const double> weights() const noexcept { return weights_; }
  /// Cartesian position of sample p (identity except for polar disks).
  Point cartesian(std::size_t p) const;

  double spacing(int axis) const noexcept { return axis == 0 ? h1_ : h2_; }
  double origin(int axis) const noexcept { return axis == 0 ? u0_ : v0_; }
  bool periodic(int axis) const noexcept { return axis == 1 && periodic_v_; }
  /// Lattice index of sample p.
  std::pair<std::size_t, std::size_t> cell(std::size_t p) const { return cells_[p]; }
  /// Sample index at lattice (i, j), if that lattice cell is part of the domain.
  std::optional<std::size_t> index(long i, long j) const;

  double scale(int axis, std::size_t p) const;
  double total_measure() const;

  /// Structural equality (geometry parameters and resolution).
  bool same_as(const WeightedDomain& other) const;
  std::string describe() const;

  friend WeightedDomain build_domain(const Geometry& geometry, Resolution resolution);

 private:
  WeightedDomain() = default;

  Geometry geometry_;
  Resolution resolution_;
  int dim_ = 1;
  double u0_ = 0.0, v0_ = 0.0, h1_ = 1.0, h2_ = 1.0;
  bool periodic_v_ = false;
  std::vector<Point> points_;
  std::vector<double> weights_;
  std::vector<std::pair<std::size_t, std::size_t>> cells_;
  std::vector<long> lattice_;  // n1*n2 -> sample index or -1
};

/// Tensor-product midpoint quadrature; weights include the metric density.
WeightedDomain build_domain(const Geometry& geometry, Resolution resolution);

using DomainPtr = std::shared_ptr<const WeightedDomain>;

inline DomainPtr make_domain(const Geometry& geometry, Resolution resolution) {
  return std::make_shared<const WeightedDomain>(build_domain(geometry, resolution));
}

/// Number of orthonormal-coframe components of a k-form in dimension n.
std::size_t form_components(int dim, int degree);

class SampledForm {
 public:
  SampledForm(DomainPtr domain, int degree, std::vector<std::vector<double>> components);

  static SampledForm zero(DomainPtr domain, int degree);
  /// Samples f(point, p) -> coefficients; the callback fills `out` with
  /// form_components(dim, degree) values.
  static SampledForm sample(DomainPtr domain, int degree,
                            const std::function<void(const Point&, std::span<double> out)>& f);
  static SampledForm scalar(DomainPtr domain, const std::function<double(const Point&)>& f);

  int degree() const noexcept { return degree_; }
  const WeightedDomain& domain() const noexcept { return *domain_; }
  const DomainPtr& domain_ptr() const noexcept { return domain_; }
  std::size_t component_count() const noexcept { return components_.size(); }
  std::span<const double> component(std::size_t c) const { return components_.at(c); }
  std::vector<double>& mutable_component(std::size_t c) { return components_.at(c); }

  double modulus(std::size_t p) const;
  std::vector<double> modulus_field() const;

  SampledForm& operator+=(const SampledForm& other);
  SampledForm& operator-=(const SampledForm& other);
  SampledForm& operator*=(double s);

 private:
  DomainPtr domain_;
  int degree_;
  std::vector<std::vector<double>> components_;
};

SampledForm operator+(SampledForm a, const SampledForm& b);
SampledForm operator-(SampledForm a, const SampledForm& b);
SampledForm operator*(double s, SampledForm a);

/// Throws std::invalid_argument unless both forms live on the same domain.
void require_same_domain(const SampledForm& a, const SampledForm& b);

/// Exterior derivative by finite differences: central in the interior,
/// second-order one-sided next to the domain boundary.
SampledForm d(const SampledForm& form);

/// Sum of component * weight for a top-degree form (compensated, fixed order).
double integrate_top(const SampledForm& form);

/// Wedge product of two 1-forms on a 2-D domain.
SampledForm wedge(const SampledForm& a, const SampledForm& b);

/// Columnar CSV (coordinates, weight, components) plus a JSON header.
void write_form(const SampledForm& form, const std::string& json_path, const std::string& csv_path);
SampledForm read_form(const std::string& json_path, const std::string& csv_path);

nlohmann::json domain_to_json(const WeightedDomain& domain);
WeightedDomain domain_from_json(const nlohmann::json& j);

}  // namespace orlicz
