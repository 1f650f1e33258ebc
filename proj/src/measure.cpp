#include "orlicz/measure.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "orlicz/numeric.hpp"

namespace orlicz {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

WeightedDomain build_domain(const Geometry& geometry, Resolution resolution) {
  WeightedDomain dom;
  dom.geometry_ = geometry;
  dom.resolution_ = resolution;

  const auto finish_lattice = [&dom](std::size_t n1, std::size_t n2, auto&& active, auto&& weight) {
    dom.lattice_.assign(n1 * n2, -1);
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n2; ++j) {
        const Point pt{dom.u0_ + (static_cast<double>(i) + 0.5) * dom.h1_,
                       dom.v0_ + (static_cast<double>(j) + 0.5) * dom.h2_};
        if (!active(pt)) continue;
        dom.lattice_[i * n2 + j] = static_cast<long>(dom.points_.size());
        dom.points_.push_back(pt);
        dom.weights_.push_back(weight(pt));
        dom.cells_.emplace_back(i, j);
      }
    }
  };

  std::visit(
      overloaded{
          [&](const Interval& g) {
            require(std::isfinite(g.a) && std::isfinite(g.b) && g.b > g.a,
                    "INTERVAL requires a < b");
            require(resolution.n1 >= 2, "INTERVAL requires resolution >= 2");
            dom.dim_ = 1;
            dom.resolution_.n2 = 1;
            dom.u0_ = g.a;
            dom.h1_ = (g.b - g.a) / static_cast<double>(resolution.n1);
            dom.h2_ = 1.0;
            finish_lattice(resolution.n1, 1, [](const Point&) { return true; },
                           [&](const Point&) { return dom.h1_; });
            for (auto& p : dom.points_) p[1] = 0.0;
          },
          [&](const HalfStrip& g) {
            require(g.y_max > g.y_min && g.z_max > 0.0, "HALF_STRIP requires positive extents");
            require(resolution.n1 >= 2 && resolution.n2 >= 2, "HALF_STRIP requires resolution >= 2 per axis");
            dom.dim_ = 2;
            dom.u0_ = g.y_min;
            dom.v0_ = 0.0;
            dom.h1_ = (g.y_max - g.y_min) / static_cast<double>(resolution.n1);
            dom.h2_ = g.z_max / static_cast<double>(resolution.n2);
            finish_lattice(resolution.n1, resolution.n2, [](const Point&) { return true; },
                           [&](const Point& p) { return std::exp(p[1]) * dom.h1_ * dom.h2_; });
          },
          [&](const Disk& g) {
            require(g.radius > 0.0, "DISK requires a positive radius");
            require(resolution.n1 >= 2 && resolution.n2 >= 2, "DISK requires resolution >= 2 per axis");
            dom.dim_ = 2;
            dom.periodic_v_ = true;
            dom.u0_ = 0.0;
            dom.v0_ = 0.0;
            dom.h1_ = g.radius / static_cast<double>(resolution.n1);
            dom.h2_ = 2.0 * std::numbers::pi / static_cast<double>(resolution.n2);
            finish_lattice(resolution.n1, resolution.n2, [](const Point&) { return true; },
                           [&](const Point& p) { return p[0] * dom.h1_ * dom.h2_; });
          },
          [&](const DiskGrid& g) {
            require(g.radius > 0.0, "DISK_GRID requires a positive radius");
            require(resolution.n1 >= 2 && resolution.n2 >= 2, "DISK_GRID requires resolution >= 2 per axis");
            dom.dim_ = 2;
            dom.u0_ = -g.radius;
            dom.v0_ = -g.radius;
            dom.h1_ = 2.0 * g.radius / static_cast<double>(resolution.n1);
            dom.h2_ = 2.0 * g.radius / static_cast<double>(resolution.n2);
            const double r2 = g.radius * g.radius;
            finish_lattice(resolution.n1, resolution.n2,
                           [r2](const Point& p) { return p[0] * p[0] + p[1] * p[1] < r2; },
                           [&](const Point&) { return dom.h1_ * dom.h2_; });
          },
      },
      geometry);
  return dom;
}

Point WeightedDomain::cartesian(std::size_t p) const {
  const Point& pt = points_.at(p);
  if (std::holds_alternative<Disk>(geometry_)) {
    return {pt[0] * std::cos(pt[1]), pt[0] * std::sin(pt[1])};
  }
  return pt;
}

std::optional<std::size_t> WeightedDomain::index(long i, long j) const {
  const long n1 = static_cast<long>(resolution_.n1);
  const long n2 = static_cast<long>(resolution_.n2);
  if (periodic_v_) j = ((j % n2) + n2) % n2;
  if (i < 0 || i >= n1 || j < 0 || j >= n2) return std::nullopt;
  const long idx = lattice_[static_cast<std::size_t>(i * n2 + j)];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

double WeightedDomain::scale(int axis, std::size_t p) const {
  if (std::holds_alternative<HalfStrip>(geometry_) && axis == 0) return std::exp(points_[p][1]);
  if (std::holds_alternative<Disk>(geometry_) && axis == 1) return points_[p][0];
  return 1.0;
}

double WeightedDomain::total_measure() const { return compensated_sum(weights_); }

bool WeightedDomain::same_as(const WeightedDomain& other) const {
  if (this == &other) return true;
  return domain_to_json(*this) == domain_to_json(other);
}

std::string WeightedDomain::describe() const { return domain_to_json(*this).dump(); }

std::size_t form_components(int dim, int degree) {
  if (degree < 0 || degree > dim) throw std::invalid_argument("form degree out of range");
  if (dim == 2 && degree == 1) return 2;
  return 1;
}

// ---------------------------------------------------------------------------
// SampledForm

SampledForm::SampledForm(DomainPtr domain, int degree, std::vector<std::vector<double>> components)
    : domain_(std::move(domain)), degree_(degree), components_(std::move(components)) {
  require(domain_ != nullptr, "SampledForm: null domain");
  require(components_.size() == form_components(domain_->dim(), degree_),
          "SampledForm: wrong number of components for degree");
  for (const auto& c : components_) {
    require(c.size() == domain_->size(), "SampledForm: component length differs from domain size");
    for (double v : c) require(std::isfinite(v), "SampledForm: non-finite coefficient");
  }
}

SampledForm SampledForm::zero(DomainPtr domain, int degree) {
  const std::size_t n = domain->size();
  const std::size_t k = form_components(domain->dim(), degree);
  return SampledForm(std::move(domain), degree, std::vector<std::vector<double>>(k, std::vector<double>(n, 0.0)));
}

SampledForm SampledForm::sample(DomainPtr domain, int degree,
                                const std::function<void(const Point&, std::span<double>)>& f) {
  const std::size_t n = domain->size();
  const std::size_t k = form_components(domain->dim(), degree);
  std::vector<std::vector<double>> comps(k, std::vector<double>(n));
  std::vector<double> buf(k);
  for (std::size_t p = 0; p < n; ++p) {
    std::fill(buf.begin(), buf.end(), 0.0);
    f(domain->points()[p], buf);
    for (std::size_t c = 0; c < k; ++c) comps[c][p] = buf[c];
  }
  return SampledForm(std::move(domain), degree, std::move(comps));
}

SampledForm SampledForm::scalar(DomainPtr domain, const std::function<double(const Point&)>& f) {
  return sample(std::move(domain), 0, [&f](const Point& p, std::span<double> out) { out[0] = f(p); });
}

double SampledForm::modulus(std::size_t p) const {
  if (components_.size() == 1) return std::abs(components_[0][p]);
  double s = 0.0;
  for (const auto& c : components_) s += c[p] * c[p];
  return std::sqrt(s);
}

std::vector<double> SampledForm::modulus_field() const {
  std::vector<double> out(domain_->size());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = modulus(p);
  return out;
}

void require_same_domain(const SampledForm& a, const SampledForm& b) {
  if (a.domain_ptr() != b.domain_ptr() && !a.domain().same_as(b.domain())) {
    throw std::invalid_argument("forms live on different domains");
  }
}

SampledForm& SampledForm::operator+=(const SampledForm& other) {
  require_same_domain(*this, other);
  require(degree_ == other.degree_, "form addition: degree mismatch");
  for (std::size_t c = 0; c < components_.size(); ++c) {
    for (std::size_t p = 0; p < components_[c].size(); ++p) components_[c][p] += other.components_[c][p];
  }
  return *this;
}

SampledForm& SampledForm::operator-=(const SampledForm& other) {
  require_same_domain(*this, other);
  require(degree_ == other.degree_, "form subtraction: degree mismatch");
  for (std::size_t c = 0; c < components_.size(); ++c) {
    for (std::size_t p = 0; p < components_[c].size(); ++p) components_[c][p] -= other.components_[c][p];
  }
  return *this;
}

SampledForm& SampledForm::operator*=(double s) {
  for (auto& c : components_) {
    for (double& v : c) v *= s;
  }
  return *this;
}

SampledForm operator+(SampledForm a, const SampledForm& b) { return a += b; }
SampledForm operator-(SampledForm a, const SampledForm& b) { return a -= b; }
SampledForm operator*(double s, SampledForm a) { return a *= s; }

// ---------------------------------------------------------------------------
// Exterior derivative

namespace {

std::vector<double> partial(const WeightedDomain& dom, std::span<const double> f, int axis) {
  const double h = dom.spacing(axis);
  std::vector<double> out(dom.size(), 0.0);
  for (std::size_t p = 0; p < dom.size(); ++p) {
    const auto [ci, cj] = dom.cell(p);
    const long i = static_cast<long>(ci);
    const long j = static_cast<long>(cj);
    const auto at = [&](long step) {
      return axis == 0 ? dom.index(i + step, j) : dom.index(i, j + step);
    };
    const auto p1 = at(1);
    const auto m1 = at(-1);
    if (p1 && m1) {
      out[p] = (f[*p1] - f[*m1]) / (2.0 * h);
    } else if (p1) {
      if (const auto p2 = at(2)) {
        out[p] = (-3.0 * f[p] + 4.0 * f[*p1] - f[*p2]) / (2.0 * h);
      } else {
        out[p] = (f[*p1] - f[p]) / h;
      }
    } else if (m1) {
      if (const auto m2 = at(-2)) {
        out[p] = (3.0 * f[p] - 4.0 * f[*m1] + f[*m2]) / (2.0 * h);
      } else {
        out[p] = (f[p] - f[*m1]) / h;
      }
    }
  }
  return out;
}

}  // namespace

SampledForm d(const SampledForm& form) {
  const WeightedDomain& dom = form.domain();
  if (form.degree() >= dom.dim()) throw std::invalid_argument("d: top-degree form has no derivative");
  const std::size_t n = dom.size();

  if (dom.dim() == 1) {
    return SampledForm(form.domain_ptr(), 1, {partial(dom, form.component(0), 0)});
  }
  if (form.degree() == 0) {
    auto du = partial(dom, form.component(0), 0);
    auto dv = partial(dom, form.component(0), 1);
    for (std::size_t p = 0; p < n; ++p) {
      du[p] /= dom.scale(0, p);
      dv[p] /= dom.scale(1, p);
    }
    return SampledForm(form.domain_ptr(), 1, {std::move(du), std::move(dv)});
  }
  // 1-form a e1 + b e2 = (a s1) du + (b s2) dv.
  std::vector<double> b_s2(n);
  std::vector<double> a_s1(n);
  for (std::size_t p = 0; p < n; ++p) {
    a_s1[p] = form.component(0)[p] * dom.scale(0, p);
    b_s2[p] = form.component(1)[p] * dom.scale(1, p);
  }
  const auto du = partial(dom, b_s2, 0);
  const auto dv = partial(dom, a_s1, 1);
  std::vector<double> out(n);
  for (std::size_t p = 0; p < n; ++p) out[p] = (du[p] - dv[p]) / (dom.scale(0, p) * dom.scale(1, p));
  return SampledForm(form.domain_ptr(), 2, {std::move(out)});
}

double integrate_top(const SampledForm& form) {
  if (form.degree() != form.domain().dim()) {
    throw std::invalid_argument("integrate_top: form is not of top degree");
  }
  return weighted_sum(form.component(0), form.domain().weights());
}

SampledForm wedge(const SampledForm& a, const SampledForm& b) {
  require_same_domain(a, b);
  require(a.domain().dim() == 2 && a.degree() == 1 && b.degree() == 1, "wedge: expects two 1-forms in 2-D");
  const std::size_t n = a.domain().size();
  std::vector<double> out(n);
  for (std::size_t p = 0; p < n; ++p) {
    out[p] = a.component(0)[p] * b.component(1)[p] - a.component(1)[p] * b.component(0)[p];
  }
  return SampledForm(a.domain_ptr(), 2, {std::move(out)});
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json domain_to_json(const WeightedDomain& domain) {
  nlohmann::json geo = std::visit(
      overloaded{
          [](const Interval& g) { return nlohmann::json{{"kind", "INTERVAL"}, {"a", g.a}, {"b", g.b}}; },
          [](const HalfStrip& g) {
            return nlohmann::json{{"kind", "HALF_STRIP"}, {"y_min", g.y_min}, {"y_max", g.y_max}, {"z_max", g.z_max}};
          },
          [](const Disk& g) { return nlohmann::json{{"kind", "DISK"}, {"radius", g.radius}}; },
          [](const DiskGrid& g) { return nlohmann::json{{"kind", "DISK_GRID"}, {"radius", g.radius}}; },
      },
      domain.geometry());
  return {{"geometry", geo}, {"resolution", {domain.resolution().n1, domain.resolution().n2}}};
}

WeightedDomain domain_from_json(const nlohmann::json& j) {
  const auto& geo = j.at("geometry");
  const std::string kind = geo.at("kind").get<std::string>();
  const Resolution res{j.at("resolution").at(0).get<std::size_t>(), j.at("resolution").at(1).get<std::size_t>()};
  if (kind == "INTERVAL") return build_domain(Interval{geo.at("a").get<double>(), geo.at("b").get<double>()}, res);
  if (kind == "HALF_STRIP") {
    return build_domain(HalfStrip{geo.at("y_min").get<double>(), geo.at("y_max").get<double>(),
                                  geo.at("z_max").get<double>()},
                        res);
  }
  if (kind == "DISK") return build_domain(Disk{geo.at("radius").get<double>()}, res);
  if (kind == "DISK_GRID") return build_domain(DiskGrid{geo.at("radius").get<double>()}, res);
  throw std::invalid_argument("unknown geometry kind '" + kind + "'");
}

void write_form(const SampledForm& form, const std::string& json_path, const std::string& csv_path) {
  nlohmann::json header = domain_to_json(form.domain());
  header["degree"] = form.degree();
  header["points"] = form.domain().size();
  header["components"] = form.component_count();
  std::ofstream js(json_path);
  if (!js) throw std::runtime_error("cannot write " + json_path);
  js << header.dump(2) << '\n';

  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write " + csv_path);
  csv << "u,v,weight";
  for (std::size_t c = 0; c < form.component_count(); ++c) csv << ",c" << c;
  csv << '\n';
  char buf[32];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    csv << buf;
  };
  const auto& dom = form.domain();
  for (std::size_t p = 0; p < dom.size(); ++p) {
    put(dom.points()[p][0]);
    csv << ',';
    put(dom.points()[p][1]);
    csv << ',';
    put(dom.weights()[p]);
    for (std::size_t c = 0; c < form.component_count(); ++c) {
      csv << ',';
      put(form.component(c)[p]);
    }
    csv << '\n';
  }
}

SampledForm read_form(const std::string& json_path, const std::string& csv_path) {
  std::ifstream js(json_path);
  if (!js) throw std::runtime_error("cannot read " + json_path);
  const nlohmann::json header = nlohmann::json::parse(js);
  auto dom = std::make_shared<const WeightedDomain>(domain_from_json(header));
  const int degree = header.at("degree").get<int>();
  const std::size_t k = form_components(dom->dim(), degree);

  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot read " + csv_path);
  std::string line;
  std::getline(csv, line);
  std::vector<std::vector<double>> comps(k, std::vector<double>(dom->size()));
  std::size_t p = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    if (p >= dom->size()) throw std::runtime_error("read_form: too many rows");
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 3 + k) throw std::runtime_error("read_form: malformed row");
    const Point& pt = dom->points()[p];
    if (std::abs(row[0] - pt[0]) > 1e-12 * (1.0 + std::abs(pt[0])) ||
        std::abs(row[1] - pt[1]) > 1e-12 * (1.0 + std::abs(pt[1]))) {
      throw std::runtime_error("read_form: coordinates do not match the header domain");
    }
    for (std::size_t c = 0; c < k; ++c) comps[c][p] = row[3 + c];
    ++p;
  }
  if (p != dom->size()) throw std::runtime_error("read_form: row count does not match the header");
  return SampledForm(std::move(dom), degree, std::move(comps));
}

}  // namespace orlicz
