#pragma once

#include <span>

#include "orlicz/measure.hpp"
#include "orlicz/nfunction.hpp"

namespace orlicz {

/// rho(f) = sum_i w_i Phi(|f_i|).  Returns +inf when the sum overflows.
double modular(const NFunction& nf, std::span<const double> values, std::span<const double> weights);
double modular(const NFunction& nf, const SampledForm& form);

/// Gauge norm inf{K > 0 : rho(f / K) <= 1}.  Bisection on K, bracket grown
/// from K = 1; stops at relative width 1e-10 or absolute width 1e-14.
/// Returns +inf when rho(f / K) is infinite for every finite K.
double luxemburg_norm(const NFunction& nf, std::span<const double> values, std::span<const double> weights);
double luxemburg_norm(const NFunction& nf, const SampledForm& form);

/// Orlicz (duality) norm via the Amemiya formula inf_{k>0} (1 + rho(k f)) / k.
double orlicz_norm(const NFunction& nf, std::span<const double> values, std::span<const double> weights);
double orlicz_norm(const NFunction& nf, const SampledForm& form);

/// ||omega||_(Phi_I) + ||d omega||_(Phi_II).
double graph_norm(const NFunction& phi_I, const NFunction& phi_II, const SampledForm& form);

/// Gauge norm of the indicator of a set of measure m: 1 / Phi^{-1}(1/m).
double indicator_norm(const NFunction& nf, double measure);

}  // namespace orlicz
