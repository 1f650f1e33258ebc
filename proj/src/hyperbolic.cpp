#include "orlicz/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "orlicz/mollifier.hpp"
#include "orlicz/numeric.hpp"

namespace orlicz::hyperbolic {

namespace {
const Mollifier& theta() { return Mollifier::standard(); }
}  // namespace

double h1(double y) { return theta()(y - 0.25); }
double h1_prime(double y) { return theta().derivative(y - 0.25); }
double h2(double y) { return theta()(y + 0.25); }
double h2_prime(double y) { return theta().derivative(y + 0.25); }
double k(double z) { return theta().antiderivative(2.0 * z - 1.0); }
double k_prime(double z) { return 2.0 * theta()(2.0 * z - 1.0); }

double pairing_normalization() {
  static const double value = [] {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    return GK::integrate([](double y) { return h1_prime(y) * h2(y); }, -0.25, 0.25, 20, 1e-15);
  }();
  return value;
}

double f_value(double y, double z) { return h1(y) * k(z) / pairing_normalization(); }
double g_value(double y, double z) { return h2(y) * k(z); }

ShiftedPair sample_shifted(const DomainPtr& domain, double alpha_shift, double gamma_shift) {
  if (!std::holds_alternative<HalfStrip>(domain->geometry())) {
    throw std::invalid_argument("sample_shifted: expects a HALF_STRIP domain");
  }
  const double norm = pairing_normalization();
  auto alpha = SampledForm::sample(domain, 1, [&](const Point& p, std::span<double> out) {
    const double y = p[0] - alpha_shift;
    const double z = p[1];
    out[0] = std::exp(-z) * h1_prime(y) * k(z) / norm;
    out[1] = h1(y) * k_prime(z) / norm;
  });
  auto gamma = SampledForm::sample(domain, 1, [&](const Point& p, std::span<double> out) {
    const double y = p[0] - gamma_shift;
    const double z = p[1];
    out[0] = std::exp(-z) * h2_prime(y) * k(z);
    out[1] = h2(y) * k_prime(z);
  });
  return {std::move(alpha), std::move(gamma)};
}

FgForms build_fg(Resolution resolution, double z_max, double y_half_width) {
  if (!(z_max >= 2.0)) throw std::invalid_argument("build_fg: z_max must be at least 2");
  if (!(y_half_width >= 1.0)) throw std::invalid_argument("build_fg: y range must contain [-1, 1]");
  auto dom = make_domain(HalfStrip::symmetric(y_half_width, z_max), resolution);
  auto f = SampledForm::scalar(dom, [](const Point& p) { return f_value(p[0], p[1]); });
  auto g = SampledForm::scalar(dom, [](const Point& p) { return g_value(p[0], p[1]); });
  auto pair = sample_shifted(dom, 0.0, 0.0);
  return FgForms{dom, std::move(f), std::move(g), std::move(pair.alpha), std::move(pair.gamma),
                 pairing_normalization()};
}

double pairing(const SampledForm& alpha, const SampledForm& gamma) {
  require_same_domain(alpha, gamma);
  if (alpha.degree() != 1 || gamma.degree() != 1 || alpha.domain().dim() != 2) {
    throw std::invalid_argument("pairing: expects two 1-forms on a 2-D domain");
  }
  return integrate_top(wedge(alpha, gamma));
}

MembershipProfile membership_profile(const NFunction& nf, const SampledForm& form, std::vector<double> z_cuts,
                                     double scale) {
  if (!std::holds_alternative<HalfStrip>(form.domain().geometry())) {
    throw std::invalid_argument("membership_profile: expects a form on a HALF_STRIP");
  }
  if (z_cuts.empty()) throw std::invalid_argument("membership_profile: no z cuts");
  std::sort(z_cuts.begin(), z_cuts.end());

  const WeightedDomain& dom = form.domain();
  std::vector<CompensatedSum> bins(z_cuts.size());
  for (std::size_t p = 0; p < dom.size(); ++p) {
    const double z = dom.points()[p][1];
    const auto it = std::lower_bound(z_cuts.begin(), z_cuts.end(), z);
    if (it == z_cuts.end()) continue;
    const double term = dom.weights()[p] * nf(scale * form.modulus(p));
    bins[static_cast<std::size_t>(it - z_cuts.begin())].add(term);
  }
  MembershipProfile prof;
  prof.cuts = z_cuts;
  double running = 0.0;
  std::vector<double> increments;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double inc = bins[i].value();
    running += inc;
    prof.partial.push_back(running);
    increments.push_back(inc);
  }
  prof.limit = running;

  const std::size_t n = increments.size();
  const double tiny = 1e-12 * std::max(std::abs(running), 1e-300);
  if (running == 0.0) {
    prof.converges = true;
  } else if (n >= 3) {
    const bool vanished = increments[n - 1] <= tiny && increments[n - 2] <= tiny;
    bool geometric = true;
    for (std::size_t i = n - 2; i < n; ++i) {
      if (!(increments[i - 1] > 0.0) || increments[i] > 0.9 * increments[i - 1]) geometric = false;
    }
    prof.converges = std::isfinite(running) && (vanished || geometric);
  }
  prof.condition_a = condition_a(nf).converges;
  prof.agrees = prof.converges == prof.condition_a;
  return prof;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++rank;
  }
  return rank;
}

GramResult gram_shifts(int count, double shift, const NFunction& phi1, const NFunction& phi2,
                       const GramOptions& options) {
  if (count < 1) throw std::invalid_argument("gram_shifts: need at least one class");
  if (!(shift >= 0.0)) throw std::invalid_argument("gram_shifts: shift must be nonnegative");
  const double cpu = options.cells_per_unit;
  const double width = 2.0 + (count - 1) * shift;
  const auto ny = static_cast<std::size_t>(std::ceil(width * cpu));
  const auto nz = static_cast<std::size_t>(std::ceil(options.z_max * cpu));
  const double y_min = -1.0;
  auto dom = make_domain(HalfStrip{y_min, y_min + static_cast<double>(ny) / cpu, options.z_max}, {ny, nz});

  std::vector<SampledForm> alphas;
  std::vector<SampledForm> gammas;
  for (int i = 0; i < count; ++i) {
    auto pair = sample_shifted(dom, i * shift, i * shift);
    alphas.push_back(std::move(pair.alpha));
    gammas.push_back(std::move(pair.gamma));
  }

  GramResult res;
  res.gram.resize(count, count);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) res.gram(i, j) = pairing(alphas[i], gammas[j]);
  }
  res.rank = numerical_rank(res.gram, options.rank_tol);

  const NFunction psi1 = phi1.conjugate();
  const NFunction psi2 = phi2.conjugate();
  res.certificate_available =
      condition_a(phi2).converges && condition_a(psi1).converges && condition_a(psi2).converges;

  std::vector<double> cuts;
  for (int c = 1; c <= static_cast<int>(std::floor(options.z_max)); ++c) cuts.push_back(c);
  res.memberships_ok = true;
  for (int i = 0; i < count; ++i) {
    res.alpha_membership.push_back(membership_profile(phi2, alphas[i], cuts));
    res.gamma_membership1.push_back(membership_profile(psi1, gammas[i], cuts));
    res.gamma_membership2.push_back(membership_profile(psi2, gammas[i], cuts));
    res.memberships_ok = res.memberships_ok && res.alpha_membership.back().converges &&
                         res.gamma_membership1.back().converges && res.gamma_membership2.back().converges;
  }
  res.certified = res.certificate_available && res.memberships_ok && res.rank == count;
  return res;
}

}  // namespace orlicz::hyperbolic
