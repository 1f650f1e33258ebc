#include "orlicz/nfunction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orlicz/numeric.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// e^u - u - 1 without cancellation for small u.
double expm_core(double u) {
  if (u < 1e-3) {
    return u * u * (0.5 + u * (1.0 / 6.0 + u * (1.0 / 24.0 + u * (1.0 / 120.0 + u / 720.0))));
  }
  return std::expm1(u) - u;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::string format_params(std::span<const double> params) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.10g", i == 0 ? "" : ",", params[i]);
    out += buf;
  }
  return out;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::power: return "POWER";
    case Family::scaled_power: return "SCALED_POWER";
    case Family::plog: return "PLOG";
    case Family::expm: return "EXPM";
    case Family::table: return "TABLE";
  }
  return "?";
}

Family family_from_string(const std::string& name) {
  if (name == "POWER") return Family::power;
  if (name == "SCALED_POWER") return Family::scaled_power;
  if (name == "PLOG") return Family::plog;
  if (name == "EXPM") return Family::expm;
  if (name == "TABLE") return Family::table;
  throw std::invalid_argument("unknown N-function family '" + name + "'");
}

// ---------------------------------------------------------------------------
// DensityTable

namespace {

void validate_samples(const std::vector<double>& t, const std::vector<double>& phi) {
  require(t.size() == phi.size(), "TABLE: abscissae and density differ in length");
  require(!t.empty(), "TABLE: no samples");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(std::isfinite(t[i]) && std::isfinite(phi[i]), "TABLE: non-finite sample");
    require(t[i] >= 0.0, "TABLE: negative abscissa");
    if (t[i] == 0.0) {
      require(phi[i] == 0.0, "TABLE: density at 0 must vanish");
    } else {
      require(phi[i] > 0.0, "TABLE: density must be positive for t > 0");
    }
    if (i > 0) {
      require(t[i] > t[i - 1], "TABLE: abscissae must be strictly increasing");
      require(phi[i] >= phi[i - 1], "TABLE: density must be nondecreasing");
    }
  }
}

void prepend_origin(std::vector<double>& t, std::vector<double>& phi, std::vector<double>* prim) {
  if (t.front() > 0.0) {
    t.insert(t.begin(), 0.0);
    phi.insert(phi.begin(), 0.0);
    if (prim) prim->insert(prim->begin(), 0.0);
  }
}

}  // namespace

DensityTable DensityTable::from_samples(std::vector<double> t, std::vector<double> phi) {
  validate_samples(t, phi);
  prepend_origin(t, phi, nullptr);
  require(t.size() >= 2, "TABLE: need at least one positive sample");
  DensityTable tab;
  tab.primitive.assign(t.size(), 0.0);
  tab.bubble.assign(t.size() - 1, 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    tab.primitive[i + 1] = tab.primitive[i] + 0.5 * (phi[i] + phi[i + 1]) * (t[i + 1] - t[i]);
  }
  tab.abscissae = std::move(t);
  tab.density = std::move(phi);
  return tab;
}

DensityTable DensityTable::from_nodes(std::vector<double> t, std::vector<double> phi,
                                      std::vector<double> primitive_values) {
  validate_samples(t, phi);
  require(primitive_values.size() == t.size(), "TABLE: primitive length mismatch");
  prepend_origin(t, phi, &primitive_values);
  require(t.size() >= 2, "TABLE: need at least one positive sample");

  DensityTable tab;
  const std::size_t n = t.size();
  tab.primitive.assign(n, 0.0);
  tab.bubble.assign(n - 1, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double delta = t[i + 1] - t[i];
    const double slope = (phi[i + 1] - phi[i]) / delta;
    const double trapezoid = 0.5 * (phi[i] + phi[i + 1]) * delta;
    const double target = primitive_values[i + 1] - primitive_values[i];
    double c = 6.0 * (target - trapezoid) / (delta * delta * delta);
    // |c| * delta <= slope keeps the density nondecreasing on the segment.
    const double limit = slope / delta;
    c = std::clamp(c, -limit, limit);
    tab.bubble[i] = c;
    tab.primitive[i + 1] = tab.primitive[i] + trapezoid + c * delta * delta * delta / 6.0;
  }
  tab.abscissae = std::move(t);
  tab.density = std::move(phi);
  return tab;
}

double DensityTable::value(double x) const {
  x = std::abs(x);
  const std::size_t n = abscissae.size();
  if (x >= abscissae.back()) {
    const std::size_t i = n - 2;
    const double delta = abscissae[i + 1] - abscissae[i];
    const double slope = (density[i + 1] - density[i]) / delta;
    const double end_slope = std::max(0.0, slope - bubble[i] * delta);
    const double u = x - abscissae.back();
    return primitive.back() + density.back() * u + 0.5 * end_slope * u * u;
  }
  const auto it = std::upper_bound(abscissae.begin(), abscissae.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - abscissae.begin()) - 1;
  const double delta = abscissae[i + 1] - abscissae[i];
  const double slope = (density[i + 1] - density[i]) / delta;
  const double u = x - abscissae[i];
  return primitive[i] + density[i] * u + 0.5 * slope * u * u +
         bubble[i] * (0.5 * delta * u * u - u * u * u / 3.0);
}

double DensityTable::density_at(double x) const {
  x = std::abs(x);
  const std::size_t n = abscissae.size();
  if (x >= abscissae.back()) {
    const std::size_t i = n - 2;
    const double delta = abscissae[i + 1] - abscissae[i];
    const double slope = (density[i + 1] - density[i]) / delta;
    const double end_slope = std::max(0.0, slope - bubble[i] * delta);
    return density.back() + end_slope * (x - abscissae.back());
  }
  const auto it = std::upper_bound(abscissae.begin(), abscissae.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - abscissae.begin()) - 1;
  const double delta = abscissae[i + 1] - abscissae[i];
  const double slope = (density[i + 1] - density[i]) / delta;
  const double u = x - abscissae[i];
  return density[i] + slope * u + bubble[i] * u * (delta - u);
}

// ---------------------------------------------------------------------------
// NFunction

NFunction::NFunction(Family family, std::vector<double> params, std::shared_ptr<const DensityTable> table)
    : family_(family), params_(std::move(params)), table_(std::move(table)) {}

NFunction NFunction::power(double p) {
  require(std::isfinite(p) && p > 1.0, "POWER(p) requires p > 1");
  return NFunction(Family::power, {p});
}

NFunction NFunction::scaled_power(double p, double c) {
  require(std::isfinite(p) && p > 1.0, "SCALED_POWER(p, c) requires p > 1");
  require(std::isfinite(c) && c > 0.0, "SCALED_POWER(p, c) requires c > 0");
  return NFunction(Family::scaled_power, {p, c});
}

NFunction NFunction::plog(double p) {
  require(std::isfinite(p) && p > 1.0, "PLOG(p) requires p > 1");
  return NFunction(Family::plog, {p});
}

NFunction NFunction::expm(double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0, "EXPM(alpha) requires alpha > 0");
  return NFunction(Family::expm, {alpha});
}

NFunction NFunction::table_from_nodes(std::vector<double> abscissae, std::vector<double> density,
                                     std::vector<double> primitive) {
  auto tab = std::make_shared<const DensityTable>(
      DensityTable::from_nodes(std::move(abscissae), std::move(density), std::move(primitive)));
  return NFunction(Family::table, {}, std::move(tab));
}

NFunction NFunction::table(std::vector<double> abscissae, std::vector<double> density) {
  auto tab = std::make_shared<const DensityTable>(
      DensityTable::from_samples(std::move(abscissae), std::move(density)));
  return NFunction(Family::table, {}, std::move(tab));
}

double NFunction::operator()(double x) const {
  const double a = std::abs(x);
  if (a == 0.0) return 0.0;
  switch (family_) {
    case Family::power: return std::pow(a, params_[0]);
    case Family::scaled_power: return params_[1] * std::pow(a, params_[0]);
    case Family::plog: return std::pow(a, params_[0]) * std::log(std::numbers::e + a);
    case Family::expm: return expm_core(params_[0] * a);
    case Family::table: return table_->value(a);
  }
  return kInf;
}

double NFunction::density(double t) const {
  const double a = std::abs(t);
  if (a == 0.0) return 0.0;
  switch (family_) {
    case Family::power: return params_[0] * std::pow(a, params_[0] - 1.0);
    case Family::scaled_power: return params_[1] * params_[0] * std::pow(a, params_[0] - 1.0);
    case Family::plog: {
      const double p = params_[0];
      return p * std::pow(a, p - 1.0) * std::log(std::numbers::e + a) + std::pow(a, p) / (std::numbers::e + a);
    }
    case Family::expm: return params_[0] * std::expm1(params_[0] * a);
    case Family::table: return table_->density_at(a);
  }
  return kInf;
}

double NFunction::inverse(double y) const {
  if (std::isnan(y) || y < 0.0) throw std::invalid_argument("inverse: argument must be >= 0");
  return solve_increasing([this](double x) { return (*this)(x); }, y);
}

namespace {

// Conjugate of a closed-form family without a closed-form dual: tabulate the
// inverse density on nodes s_i = phi(t_i) with exact node values from the
// Young equality Psi(phi(t)) = t phi(t) - Phi(t).
std::shared_ptr<const DensityTable> tabulate_conjugate(const NFunction& nf) {
  constexpr double t_min = 1e-8;
  constexpr double t_max = 1e8;
  constexpr double density_cap = 1e15;
  const double ratio = std::pow(10.0, 1.0 / 400.0);

  std::vector<double> s;
  std::vector<double> psi;
  std::vector<double> prim;
  double t = t_min;
  for (;;) {
    const double phi_t = nf.density(t);
    s.push_back(phi_t);
    psi.push_back(t);
    prim.push_back(t * phi_t - nf(t));
    if (t >= t_max || phi_t >= density_cap) break;
    double next = t * ratio;
    if (nf.density(next) > phi_t * ratio) {
      const double target = phi_t * ratio;
      double lo = t;
      double hi = next;
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        (nf.density(mid) < target ? lo : hi) = mid;
      }
      next = hi;
    }
    t = next;
  }
  return std::make_shared<const DensityTable>(
      DensityTable::from_nodes(std::move(s), std::move(psi), std::move(prim)));
}

std::shared_ptr<const DensityTable> swap_table(const DensityTable& tab) {
  std::vector<double> s;
  std::vector<double> psi;
  std::vector<double> prim;
  for (std::size_t i = 1; i < tab.abscissae.size(); ++i) {
    const double t = tab.abscissae[i];
    const double phi_t = tab.density[i];
    const double dual = t * phi_t - tab.primitive[i];
    if (!s.empty() && phi_t == s.back()) {
      // Flat density: the left inverse takes the right end of the plateau.
      psi.back() = t;
      prim.back() = dual;
      continue;
    }
    s.push_back(phi_t);
    psi.push_back(t);
    prim.push_back(dual);
  }
  return std::make_shared<const DensityTable>(
      DensityTable::from_nodes(std::move(s), std::move(psi), std::move(prim)));
}

}  // namespace

NFunction NFunction::conjugate() const {
  switch (family_) {
    case Family::power: {
      const double p = params_[0];
      const double q = p / (p - 1.0);
      return scaled_power(q, (p - 1.0) * std::pow(p, -q));
    }
    case Family::scaled_power: {
      const double p = params_[0];
      const double c = params_[1];
      const double q = p / (p - 1.0);
      return scaled_power(q, (p - 1.0) / p * std::pow(c * p, -1.0 / (p - 1.0)));
    }
    case Family::plog:
    case Family::expm: return NFunction(Family::table, {}, tabulate_conjugate(*this));
    case Family::table: return NFunction(Family::table, {}, swap_table(*table_));
  }
  throw std::logic_error("conjugate: unknown family");
}

std::string NFunction::name() const {
  if (family_ == Family::table) {
    return "TABLE[" + std::to_string(table_->abscissae.size()) + "]";
  }
  return to_string(family_) + "(" + format_params(params_) + ")";
}

// ---------------------------------------------------------------------------
// Growth classification

namespace {

// Empirical Delta_2 trend over the grid.
std::pair<double, bool> delta2_trend(const NFunction& nf, std::span<const double> grid) {
  double sup = 0.0;
  const double x_max = *std::max_element(grid.begin(), grid.end());
  const double x_min = *std::min_element(grid.begin(), grid.end());
  double last_hi = x_max / 10.0;
  double last_lo = x_max / 100.0;
  if (last_lo < x_min) {
    // Grid spans less than two decades: split it in halves (log scale).
    last_hi = std::sqrt(x_min * x_max);
    last_lo = x_min;
  }
  double max_last = 0.0;
  double max_prev = 0.0;
  for (double x : grid) {
    const double base = nf(x);
    if (!(base > 0.0)) continue;
    const double ratio = nf(2.0 * x) / base;
    sup = std::max(sup, ratio);
    if (x >= last_hi) {
      max_last = std::max(max_last, ratio);
    } else if (x >= last_lo) {
      max_prev = std::max(max_prev, ratio);
    }
  }
  const bool bounded = std::isfinite(max_last) && max_last <= max_prev * 1.01;
  return {sup, bounded};
}

}  // namespace

GrowthReport growth_class(const NFunction& nf, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("growth_class: empty grid");
  for (double x : grid) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("growth_class: grid must be positive");
  }
  GrowthReport report;
  const auto [sup, empirical] = delta2_trend(nf, grid);
  report.delta2_sup = sup;
  report.delta2_empirical = empirical;

  const NFunction dual = nf.conjugate();
  std::vector<double> dual_grid;
  dual_grid.reserve(grid.size());
  for (double x : grid) {
    const double s = nf.density(x);
    if (s > 0.0 && std::isfinite(s)) dual_grid.push_back(s);
  }
  report.nabla2_empirical = !dual_grid.empty() && delta2_trend(dual, dual_grid).second;

  switch (nf.family()) {
    case Family::power:
    case Family::scaled_power:
    case Family::plog:
      report.delta2_holds = true;
      report.nabla2_holds = true;
      break;
    case Family::expm:
      report.delta2_holds = false;
      report.nabla2_holds = true;
      break;
    case Family::table:
      report.delta2_holds = report.delta2_empirical;
      report.nabla2_holds = report.nabla2_empirical;
      break;
  }

  static constexpr double candidates[] = {1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 16.0, 32.0, 64.0};
  for (double c : candidates) {
    bool ok = true;
    for (double x : grid) {
      if (nf(c * x) < 2.0 * c * nf(x) * (1.0 - 1e-12)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      report.witness_c = c;
      break;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Condition (A)

ConditionA condition_a(const NFunction& nf, double quad_tol) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  const auto integrand = [&nf](double v) { return nf(v) / (v * v); };

  ConditionA result;
  CompensatedSum total;
  double previous = -1.0;
  int geometric_streak = 0;
  double hi = 1.0;
  for (int j = 0; j < 1000; ++j) {
    const double lo = 0.5 * hi;
    const double piece = Quad::integrate(integrand, lo, hi, 0);
    total.add(piece);
    hi = lo;
    if (!std::isfinite(piece)) return result;
    if (piece == 0.0) {
      result.converges = true;
      result.value = total.value();
      return result;
    }
    if (previous > 0.0) {
      const double ratio = piece / previous;
      geometric_streak = ratio < 0.999 ? geometric_streak + 1 : 0;
      if (geometric_streak >= 3) {
        const double tail = piece * ratio / (1.0 - ratio);
        if (tail < 1e-3 * quad_tol) {
          result.converges = true;
          result.value = total.value() + tail;
          return result;
        }
      }
    }
    previous = piece;
  }
  result.value = total.value();
  return result;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const NFunction& nf) {
  j = nlohmann::json{{"family", to_string(nf.family())}};
  j["params"] = std::vector<double>(nf.params().begin(), nf.params().end());
  if (const DensityTable* tab = nf.table_data()) {
    j["abscissae"] = tab->abscissae;
    j["density"] = tab->density;
    j["primitive"] = tab->primitive;
  }
}

NFunction nfunction_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw std::invalid_argument("N-function spec must be an object with a string 'family'");
  }
  const Family family = family_from_string(j["family"].get<std::string>());
  std::vector<double> params;
  if (j.contains("params")) {
    if (!j["params"].is_array()) throw std::invalid_argument("N-function 'params' must be an array");
    for (const auto& v : j["params"]) {
      if (!v.is_number()) throw std::invalid_argument("N-function 'params' must be numbers");
      params.push_back(v.get<double>());
    }
  }
  const auto need = [&](std::size_t n) {
    if (params.size() != n) {
      throw std::invalid_argument(to_string(family) + " expects " + std::to_string(n) + " parameter(s)");
    }
  };
  switch (family) {
    case Family::power: need(1); return NFunction::power(params[0]);
    case Family::scaled_power: need(2); return NFunction::scaled_power(params[0], params[1]);
    case Family::plog: need(1); return NFunction::plog(params[0]);
    case Family::expm: need(1); return NFunction::expm(params[0]);
    case Family::table: {
      if (!j.contains("abscissae") || !j.contains("density")) {
        throw std::invalid_argument("TABLE requires 'abscissae' and 'density'");
      }
      auto t = j["abscissae"].get<std::vector<double>>();
      auto phi = j["density"].get<std::vector<double>>();
      if (j.contains("primitive")) {
        auto prim = j["primitive"].get<std::vector<double>>();
        return NFunction::table_from_nodes(std::move(t), std::move(phi), std::move(prim));
      }
      return NFunction::table(std::move(t), std::move(phi));
    }
  }
  throw std::invalid_argument("unsupported N-function family");
}

}  // namespace orlicz
