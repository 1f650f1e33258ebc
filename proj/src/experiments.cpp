#include "orlicz/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "orlicz/ball.hpp"
#include "orlicz/complexes.hpp"
#include "orlicz/hyperbolic.hpp"
#include "orlicz/line.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/nfunction.hpp"
#include "orlicz/numeric.hpp"
#include "orlicz/orlicz_norm.hpp"
#include "orlicz/svg.hpp"

namespace orlicz::lab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string flag(bool b) { return b ? "true" : "false"; }

// RFC 4180 quoting for cells holding separators or quotes.
std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Csv {
 public:
  Csv(std::vector<std::string> header, std::string hash) : header_(std::move(header)), hash_(std::move(hash)) {
    header_.push_back("config_hash");
    header_.push_back("version");
  }

  void row(std::vector<std::string> cells) {
    if (cells.size() + 2 != header_.size()) throw std::logic_error("Csv: row width differs from header");
    cells.push_back(hash_);
    cells.push_back(kVersion);
    rows_.push_back(std::move(cells));
  }

  void write(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << quote(cells[i]);
      out << "\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> header_;
  std::string hash_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

// ---------------------------------------------------------------------------
// Parameter access with validation messages.

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  return j;
}

double get_number(const json& p, const std::string& key, std::optional<double> fallback) {
  if (!p.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError("params." + key + " is required");
  }
  if (!p[key].is_number()) throw ValidationError("params." + key + " must be a number");
  const double v = p[key].get<double>();
  if (!std::isfinite(v)) throw ValidationError("params." + key + " must be finite");
  return v;
}

int get_int(const json& p, const std::string& key, std::optional<int> fallback) {
  if (!p.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError("params." + key + " is required");
  }
  if (!p[key].is_number_integer()) throw ValidationError("params." + key + " must be an integer");
  return p[key].get<int>();
}

bool get_bool(const json& p, const std::string& key, bool fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_boolean()) throw ValidationError("params." + key + " must be a boolean");
  return p[key].get<bool>();
}

std::vector<double> get_numbers(const json& p, const std::string& key, std::optional<std::vector<double>> fallback) {
  if (!p.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError("params." + key + " is required");
  }
  if (!p[key].is_array()) throw ValidationError("params." + key + " must be an array");
  std::vector<double> out;
  for (const auto& v : p[key]) {
    if (!v.is_number()) throw ValidationError("params." + key + " must contain numbers");
    out.push_back(v.get<double>());
  }
  if (out.empty()) throw ValidationError("params." + key + " must not be empty");
  return out;
}

NFunction parse_nfunction(const json& spec, const std::string& where) {
  if (!spec.is_object()) throw ValidationError(where + ": N-function spec must be an object");
  try {
    if (spec.contains("conjugate")) return parse_nfunction(spec["conjugate"], where + ".conjugate").conjugate();
    return nfunction_from_json(spec);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(where + ": malformed N-function spec (" + e.what() + ")");
  }
}

NFunction get_nfunction(const json& p, const std::string& key, const NFunction& fallback) {
  if (!p.contains(key)) return fallback;
  return parse_nfunction(p[key], "params." + key);
}

std::vector<NFunction> get_nfunctions(const json& p, const std::string& key, std::vector<NFunction> fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_array() || p[key].empty()) throw ValidationError("params." + key + " must be a nonempty array");
  std::vector<NFunction> out;
  for (std::size_t i = 0; i < p[key].size(); ++i) {
    out.push_back(parse_nfunction(p[key][i], "params." + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

struct Context {
  const json& params;
  fs::path out_dir;
  std::string hash;
  std::uint64_t seed;
  bool plots;
  RunReport& report;

  fs::path file(const std::string& name) {
    report.files.push_back(out_dir / name);
    return out_dir / name;
  }
};

// ---------------------------------------------------------------------------

void run_nfunc_report(Context& ctx) {
  const auto& p = ctx.params;
  const auto nfs = get_nfunctions(p, "nfunctions",
                                  {NFunction::power(1.5), NFunction::power(2.0), NFunction::power(3.0),
                                   NFunction::power(5.0), NFunction::plog(2.0), NFunction::expm(1.0)});
  const json grid_spec = p.value("grid", json::object());
  require_object(grid_spec, "params.grid");
  const double lo = get_number(grid_spec, "lo", 1e-3);
  const double hi = get_number(grid_spec, "hi", 1e3);
  const int count = get_int(grid_spec, "count", 121);
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ValidationError("params.grid needs 0 < lo < hi and count >= 2");
  const auto grid = log_grid(lo, hi, static_cast<std::size_t>(count));

  Csv csv({"name", "family", "delta2_sup", "delta2_holds", "nabla2_holds", "witness_c", "condition_a_converges",
           "condition_a_value", "conjugate"},
          ctx.hash);
  std::vector<svg::Series> series;
  for (const auto& nf : nfs) {
    const GrowthReport g = growth_class(nf, grid);
    const ConditionA a = condition_a(nf);
    const NFunction conj = nf.conjugate();
    csv.row({nf.name(), to_string(nf.family()), num(g.delta2_sup), flag(g.delta2_holds), flag(g.nabla2_holds),
             g.witness_c ? num(*g.witness_c) : "", flag(a.converges), num(a.value), conj.name()});
    svg::Series s{nf.name(), {}, {}};
    for (double x : grid) {
      const double base = nf(x);
      if (base > 0.0 && std::isfinite(nf(2.0 * x))) {
        s.x.push_back(x);
        s.y.push_back(nf(2.0 * x) / base);
      }
    }
    series.push_back(std::move(s));
  }
  csv.write(ctx.file("nfunc_report.csv"));
  ctx.report.summary["count"] = nfs.size();
  if (ctx.plots) {
    write_text(ctx.file("nfunc_delta2.svg"),
               svg::line_plot(series, {"Doubling ratio", "x", "Phi(2x)/Phi(x)", true, true}));
  }
}

void run_line_blowup(Context& ctx) {
  const auto& p = ctx.params;
  const NFunction phi1 = get_nfunction(p, "phi1", NFunction::power(2.0));
  const NFunction phi2 = get_nfunction(p, "phi2", NFunction::power(2.0));
  const auto a_list = get_numbers(p, "a_list", std::nullopt);
  for (double a : a_list) {
    if (!(a > 1.0)) throw ValidationError("params.a_list entries must exceed 1");
  }
  const int cpu = get_int(p, "cells_per_unit", 32);
  if (cpu < 2) throw ValidationError("params.cells_per_unit must be at least 2");
  const bool half = get_bool(p, "half_line", false);

  const auto rows = line::blowup_certificate(phi1, phi2, a_list, cpu, half);
  Csv csv({"a", "lower_bound", "gauge_norm_f", "gauge_norm_df", "ratio"}, ctx.hash);
  bool increasing = true;
  bool above = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    csv.row({num(r.a), num(r.lower_bound), num(r.gauge_f), num(r.gauge_df), num(r.ratio)});
    if (i > 0 && !(r.lower_bound > rows[i - 1].lower_bound)) increasing = false;
    if (!(r.ratio >= r.lower_bound)) above = false;
  }
  csv.write(ctx.file("line_blowup.csv"));
  auto& s = ctx.report.summary;
  s["lower_bound_increasing"] = increasing;
  s["ratio_above_bound"] = above;
  if (rows.size() >= 2) s["loglog_slope"] = line::loglog_slope(rows);
  if (ctx.plots) {
    svg::Series measured{"measured ratio", {}, {}};
    svg::Series bound{"lower bound", {}, {}};
    for (const auto& r : rows) {
      measured.x.push_back(r.a);
      measured.y.push_back(r.ratio);
      bound.x.push_back(r.a);
      bound.y.push_back(r.lower_bound);
    }
    write_text(ctx.file("line_blowup.svg"),
               svg::line_plot({measured, bound}, {"Sobolev ratio blow-up", "a", "ratio", true, true}));
  }
}

std::function<double(double)> parse_omega(const json& p) {
  const json spec = p.value("omega", json{{"type", "indicator"}, {"a", 0.0}, {"b", 1.0}});
  require_object(spec, "params.omega");
  const std::string type = spec.value("type", "");
  if (type == "indicator") {
    const double a = get_number(spec, "a", 0.0);
    const double b = get_number(spec, "b", 1.0);
    if (!(b > a)) throw ValidationError("params.omega: indicator needs a < b");
    return [a, b](double x) { return x >= a && x < b ? 1.0 : 0.0; };
  }
  if (type == "gaussian") {
    const double c = get_number(spec, "center", 0.0);
    const double sigma = get_number(spec, "sigma", 1.0);
    const double amp = get_number(spec, "amplitude", 1.0);
    if (!(sigma > 0.0)) throw ValidationError("params.omega: sigma must be positive");
    return [c, sigma, amp](double x) { return amp * std::exp(-0.5 * (x - c) * (x - c) / (sigma * sigma)); };
  }
  if (type == "bump") {
    const double c = get_number(spec, "center", 0.5);
    const double r = get_number(spec, "radius", 0.5);
    const double amp = get_number(spec, "amplitude", 1.0);
    if (!(r > 0.0)) throw ValidationError("params.omega: radius must be positive");
    return [c, r, amp](double x) {
      const double s = (x - c) / r;
      return std::abs(s) < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
    };
  }
  throw ValidationError("params.omega.type must be one of indicator, gaussian, bump");
}

void run_line_staircase(Context& ctx) {
  const auto& p = ctx.params;
  const NFunction phi2 = get_nfunction(p, "phi2", NFunction::power(2.0));
  const auto m_values = get_numbers(p, "m_list", std::nullopt);
  std::vector<int> ms;
  for (double m : m_values) {
    if (!(m >= 1.0) || m != std::floor(m)) throw ValidationError("params.m_list entries must be positive integers");
    ms.push_back(static_cast<int>(m));
  }
  const int cpu = get_int(p, "cells_per_unit", 32);
  if (cpu < 2) throw ValidationError("params.cells_per_unit must be at least 2");
  const bool half = get_bool(p, "half_line", false);
  const auto omega_fn = parse_omega(p);
  const auto sample = [&](double extent) {
    const double lo = half ? 0.0 : -extent;
    const auto cells = static_cast<std::size_t>(std::llround((extent - lo) * cpu));
    auto dom = make_domain(Interval{lo, extent}, {cells, 1});
    return SampledForm::sample(dom, 1, [&](const Point& x, std::span<double> out) { out[0] = omega_fn(x[0]); });
  };

  // Size the truncation so it covers every window and every lambda support.
  const int m_max = *std::max_element(ms.begin(), ms.end());
  double extent = p.contains("extent") ? get_number(p, "extent", std::nullopt) : 0.0;
  if (!p.contains("extent")) {
    const double probe = m_max + 8.0;
    const SampledForm pilot = sample(probe);
    double need = probe;
    for (int m : ms) {
      const double lo = half ? 0.0 : -static_cast<double>(m);
      CompensatedSum c;
      const auto& dom = pilot.domain();
      for (std::size_t q = 0; q < dom.size(); ++q) {
        const double x = dom.points()[q][0];
        if (x >= lo && x <= m) c.add(pilot.component(0)[q] * dom.weights()[q]);
      }
      if (c.value() != 0.0) {
        const double hw = line::staircase_half_width(phi2, m, c.value());
        need = std::max(need, (half ? 2.0 * hw : hw) + 2.0);
      }
    }
    extent = std::ceil(need);
  }
  if (!(extent >= m_max)) throw ValidationError("params.extent must cover [-m, m] for every m");
  const SampledForm omega = sample(extent);

  Csv csv({"m", "C_m", "t_m", "eps_m", "lambda_norm", "residual", "tail_norm", "delta2_warning"}, ctx.hash);
  std::vector<line::StaircaseResult> results;
  for (int m : ms) {
    try {
      results.push_back(line::staircase(omega, m, phi2, half));
    } catch (const std::domain_error& e) {
      throw ValidationError(std::string("params.extent too small: ") + e.what());
    }
    const auto& r = results.back();
    csv.row({std::to_string(m), num(r.c_m), num(r.t_m), num(r.eps_m), num(r.lambda_norm), num(r.residual),
             num(r.tail_norm), flag(r.delta2_warning)});
  }
  csv.write(ctx.file("line_staircase.csv"));
  bool monotone = true;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].m > results[i - 1].m && results[i].residual > results[i - 1].residual) monotone = false;
  }
  auto& s = ctx.report.summary;
  s["extent"] = extent;
  s["residual_nonincreasing"] = monotone;
  s["final_residual"] = results.back().residual;
  if (ctx.plots) {
    svg::Series res{"residual", {}, {}};
    svg::Series lam{"||lambda_m||", {}, {}};
    for (const auto& r : results) {
      res.x.push_back(r.m);
      res.y.push_back(r.residual);
      lam.x.push_back(r.m);
      lam.y.push_back(r.lambda_norm);
    }
    write_text(ctx.file("line_staircase.svg"),
               svg::line_plot({res, lam}, {"Staircase approximation", "m", "gauge norm", true, true}));
  }
}

void run_hyperbolic_gram(Context& ctx) {
  const auto& p = ctx.params;
  const int count = get_int(p, "J", 5);
  const double shift = get_number(p, "shift", 2.0);
  if (count < 1) throw ValidationError("params.J must be at least 1");
  if (!(shift >= 0.0)) throw ValidationError("params.shift must be nonnegative");
  const NFunction phi1 = get_nfunction(p, "phi1", NFunction::power(2.0));
  const NFunction phi2 = get_nfunction(p, "phi2", NFunction::power(2.0));
  hyperbolic::GramOptions opt;
  opt.cells_per_unit = get_int(p, "cells_per_unit", opt.cells_per_unit);
  opt.z_max = get_number(p, "z_max", opt.z_max);
  if (opt.cells_per_unit < 2 || !(opt.z_max >= 2.0)) {
    throw ValidationError("params: cells_per_unit >= 2 and z_max >= 2 required");
  }
  const auto pr = get_numbers(p, "pairing_resolution", std::vector<double>{512.0, 512.0});
  if (pr.size() != 2 || pr[0] < 2 || pr[1] < 2) throw ValidationError("params.pairing_resolution must be [n_y, n_z]");

  const auto fg = hyperbolic::build_fg({static_cast<std::size_t>(pr[0]), static_cast<std::size_t>(pr[1])}, 2.0);
  const double unit_pairing = hyperbolic::pairing(fg.df, fg.dg);
  const auto res = hyperbolic::gram_shifts(count, shift, phi1, phi2, opt);

  Csv gram({"i", "j", "value"}, ctx.hash);
  double offdiag = 0.0;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      gram.row({std::to_string(i), std::to_string(j), num(res.gram(i, j))});
      if (i != j) offdiag = std::max(offdiag, std::abs(res.gram(i, j)));
    }
  }
  gram.write(ctx.file("hyperbolic_gram.csv"));

  Csv mem({"class", "role", "cut", "partial_modular", "converges", "condition_a"}, ctx.hash);
  const auto emit = [&](const std::vector<hyperbolic::MembershipProfile>& profiles, const std::string& role) {
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      const auto& prof = profiles[i];
      for (std::size_t c = 0; c < prof.cuts.size(); ++c) {
        mem.row({std::to_string(i), role, num(prof.cuts[c]), num(prof.partial[c]), flag(prof.converges),
                 flag(prof.condition_a)});
      }
    }
  };
  emit(res.alpha_membership, "alpha_phi2");
  emit(res.gamma_membership1, "gamma_psi1");
  emit(res.gamma_membership2, "gamma_psi2");
  mem.write(ctx.file("hyperbolic_membership.csv"));

  auto& s = ctx.report.summary;
  s["pairing_df_dg"] = unit_pairing;
  s["rank"] = res.rank;
  s["max_offdiag"] = offdiag;
  s["certificate_available"] = res.certificate_available;
  s["memberships_ok"] = res.memberships_ok;
  s["certified"] = res.certified;
  if (ctx.plots && !res.alpha_membership.empty()) {
    const auto series = [](const hyperbolic::MembershipProfile& m, const std::string& label) {
      return svg::Series{label, m.cuts, m.partial};
    };
    write_text(ctx.file("hyperbolic_membership.svg"),
               svg::line_plot({series(res.alpha_membership[0], "alpha in Phi2"),
                               series(res.gamma_membership1[0], "gamma in Psi1"),
                               series(res.gamma_membership2[0], "gamma in Psi2")},
                              {"Membership profiles", "z cut", "partial modular", false, false}));
  }
}

void run_ball_poincare(Context& ctx) {
  const auto& p = ctx.params;
  const auto res_values = get_numbers(p, "resolutions", std::vector<double>{64.0, 128.0});
  const auto nfs =
      get_nfunctions(p, "nfunctions", {NFunction::power(1.5), NFunction::power(2.0), NFunction::power(3.0)});
  const double radius = get_number(p, "radius", 1.0);
  if (!(radius > 0.0)) throw ValidationError("params.radius must be positive");
  for (double r : res_values) {
    if (!(r >= 8.0) || r != std::floor(r)) throw ValidationError("params.resolutions must be integers >= 8");
  }

  Csv csv({"resolution", "form", "degree", "phi", "residual", "norm_ratio", "bound", "closed", "solve_residual"},
          ctx.hash);
  json per_res = json::array();
  std::vector<double> max_res;
  double max_ratio_over_bound = 0.0;
  const ball::CenterRule& rule = ball::default_center_rule();
  for (double rv : res_values) {
    const auto n = static_cast<std::size_t>(rv);
    auto dom = make_domain(DiskGrid{radius}, {n, n});
    double worst = 0.0;
    for (const auto& item : ball::homotopy_battery(dom)) {
      const SampledForm& w = item.form;
      const SampledForm tw = ball::averaged_T(w, rule);
      const SampledForm dtw = d(tw);
      SampledForm r = w - dtw;
      if (w.degree() < 2) r -= ball::averaged_T(d(w), rule);
      const SampledForm solve_err = dtw - w;
      for (const auto& nf : nfs) {
        const double base = luxemburg_norm(nf, w);
        const double residual = base > 0.0 ? luxemburg_norm(nf, r) / base : 0.0;
        const double ratio = base > 0.0 ? luxemburg_norm(nf, tw) / base : 0.0;
        const double bound = ball::riesz_bound(nf, radius, rule);
        const double solve = item.closed && base > 0.0 ? luxemburg_norm(nf, solve_err) / base : 0.0;
        worst = std::max(worst, residual);
        max_ratio_over_bound = std::max(max_ratio_over_bound, ratio / bound);
        csv.row({std::to_string(n), item.name, std::to_string(w.degree()), nf.name(), num(residual), num(ratio),
                 num(bound), flag(item.closed), item.closed ? num(solve) : ""});
      }
      if (ctx.plots && n == static_cast<std::size_t>(res_values.back()) && item.name == "bump_area") {
        std::vector<Point> pts(dom->points().begin(), dom->points().end());
        write_text(ctx.file("ball_T_bump_area.svg"),
                   svg::heatmap(pts, tw.modulus_field(), dom->spacing(0), "|T w| for bump_area"));
      }
    }
    max_res.push_back(worst);
    per_res.push_back({{"resolution", n}, {"max_residual", worst}});
  }
  csv.write(ctx.file("ball_poincare.csv"));
  auto& s = ctx.report.summary;
  s["per_resolution"] = per_res;
  s["max_ratio_over_bound"] = max_ratio_over_bound;
  s["kernel_constant"] = ball::kernel_constant(rule, radius);
  if (max_res.size() >= 2 && max_res.back() > 0.0) s["refinement_factor"] = max_res[max_res.size() - 2] / max_res.back();
  if (ctx.plots) {
    write_text(ctx.file("ball_residual.svg"),
               svg::line_plot({{"max residual", res_values, max_res}},
                              {"Homotopy identity residual", "grid cells per axis", "relative residual", true, true}));
  }
}

void run_complex_constants(Context& ctx) {
  const auto& p = ctx.params;
  if (!p.contains("complexes") || !p["complexes"].is_array() || p["complexes"].empty()) {
    throw ValidationError("params.complexes must be a nonempty array");
  }
  SamplingOptions opt;
  opt.samples = get_int(p, "samples", opt.samples);
  opt.seed = ctx.seed;
  if (opt.samples < 0) throw ValidationError("params.samples must be nonnegative");

  Csv csv({"name", "parameter", "level", "constant", "samples", "seed", "exact", "dim_h"}, ctx.hash);
  json families = json::array();
  std::vector<svg::Series> series;
  for (std::size_t idx = 0; idx < p["complexes"].size(); ++idx) {
    const json& e = require_object(p["complexes"][idx], "params.complexes[" + std::to_string(idx) + "]");
    const std::string name = e.value("name", "complex" + std::to_string(idx));
    const std::string type = e.value("type", "");
    std::vector<std::pair<double, FiniteComplex>> items;
    int level = 1;
    if (type == "interval") {
      const auto lengths = e.contains("lengths") ? get_numbers(e, "lengths", std::nullopt)
                                                 : std::vector<double>{get_number(e, "length", 1.0)};
      const double h = get_number(e, "h", 0.1);
      std::optional<NFunction> nf;
      if (e.contains("nfunction")) nf = parse_nfunction(e["nfunction"], "params.complexes.nfunction");
      const std::string norm = e.value("norm", "gauge");
      if (norm != "gauge" && norm != "amemiya") throw ValidationError("params.complexes.norm must be gauge or amemiya");
      for (double len : lengths) {
        if (!(len > 0.0) || !(h > 0.0) || h > len) throw ValidationError("params.complexes: need 0 < h <= length");
        items.emplace_back(len, interval_complex(len, h, nf, norm == "gauge" ? NormKind::gauge : NormKind::amemiya));
      }
    } else if (type == "matrix") {
      try {
        items.emplace_back(0.0, complex_from_json(e.at("complex")));
      } catch (const std::exception& ex) {
        throw ValidationError("params.complexes: malformed complex (" + std::string(ex.what()) + ")");
      }
      level = get_int(e, "level", 1);
      if (level < 1 || level >= items.back().second.levels()) throw ValidationError("params.complexes.level out of range");
    } else {
      throw ValidationError("params.complexes.type must be interval or matrix");
    }
    std::vector<double> constants;
    svg::Series sr{name, {}, {}};
    for (const auto& [param, c] : items) {
      const auto est = best_solution_constant(c, level, opt);
      const auto dims = cohomology_dims(c, opt.rank_tol);
      csv.row({name, num(param), std::to_string(level), num(est.constant), std::to_string(est.samples),
               std::to_string(est.seed), flag(est.exact), std::to_string(dims[static_cast<std::size_t>(level)].dim_h)});
      constants.push_back(est.constant);
      sr.x.push_back(param);
      sr.y.push_back(est.constant);
    }
    json fam{{"name", name}, {"diverges_under_doubling", diverges_under_doubling(constants)}};
    if (items.size() >= 2 && type == "interval") {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(items.size());
      for (std::size_t i = 0; i < items.size(); ++i) {
        const double x = std::log(sr.x[i]);
        const double y = std::log(sr.y[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      fam["loglog_slope"] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    families.push_back(fam);
    series.push_back(std::move(sr));
  }
  csv.write(ctx.file("complex_constants.csv"));
  ctx.report.summary["families"] = families;
  if (ctx.plots) {
    write_text(ctx.file("complex_constants.svg"),
               svg::line_plot(series, {"Solution constants", "truncation length", "constant", true, true}));
  }
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ValidationError("output directory not writable: " + dir.string());
  const fs::path probe = dir / ".orlicz-lab-probe";
  {
    std::ofstream out(probe);
    if (!out) throw ValidationError("output directory not writable: " + dir.string());
  }
  fs::remove(probe, ec);
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"nfunc-report",    "line-blowup",   "line-staircase",
                                              "hyperbolic-gram", "ball-poincare", "complex-constants"};
  return kinds;
}

json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config is not valid JSON: " + std::string(e.what()));
  }
}

std::string config_hash(const json& config, std::uint64_t seed) {
  const std::string text = config.dump() + "#seed=" + std::to_string(seed);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunReport run_experiment(const json& config, const RunOptions& options) {
  require_object(config, "config");
  if (config.contains("schema_version") &&
      (!config["schema_version"].is_number_integer() || config["schema_version"].get<int>() != kSchemaVersion)) {
    throw ValidationError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  if (!config.contains("kind") || !config["kind"].is_string()) throw ValidationError("config.kind is required");
  const std::string kind = config["kind"].get<std::string>();
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
    throw ValidationError("unknown experiment kind '" + kind + "'");
  }
  if (options.expected_kind && *options.expected_kind != kind) {
    throw ValidationError("config kind '" + kind + "' does not match subcommand '" + *options.expected_kind + "'");
  }
  std::uint64_t seed = kDefaultSeed;
  if (config.contains("seed")) {
    if (!config["seed"].is_number_integer() || config["seed"].get<std::int64_t>() < 0) {
      throw ValidationError("config.seed must be a nonnegative integer");
    }
    seed = config["seed"].get<std::uint64_t>();
  }
  if (options.seed) seed = *options.seed;
  const json params = config.value("params", json::object());
  require_object(params, "config.params");

  prepare_out_dir(options.out_dir);
  RunReport report;
  report.kind = kind;
  report.hash = config_hash(config, seed);
  report.summary = json::object();
  Context ctx{params, options.out_dir, report.hash, seed, options.plots, report};

  if (kind == "nfunc-report") run_nfunc_report(ctx);
  if (kind == "line-blowup") run_line_blowup(ctx);
  if (kind == "line-staircase") run_line_staircase(ctx);
  if (kind == "hyperbolic-gram") run_hyperbolic_gram(ctx);
  if (kind == "ball-poincare") run_ball_poincare(ctx);
  if (kind == "complex-constants") run_complex_constants(ctx);

  json files = json::array();
  const fs::path summary_path = options.out_dir / "summary.json";
  for (const auto& f : report.files) files.push_back(f.filename().string());
  files.push_back("summary.json");
  json doc{{"kind", kind},   {"config_hash", report.hash}, {"version", kVersion},
           {"seed", seed},   {"summary", report.summary},  {"files", files}};
  write_text(summary_path, doc.dump(2) + "\n");
  report.files.push_back(summary_path);
  return report;
}

int run_and_report(const fs::path& config_path, const RunOptions& options) {
  try {
    const json config = load_config(config_path);
    const RunReport report = run_experiment(config, options);
    for (const auto& f : report.files) std::cout << "wrote " << f.string() << "\n";
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NonConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace orlicz::lab
