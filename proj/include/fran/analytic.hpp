#pragma once

#include <functional>
#include <optional>

#include "fran/network_params.hpp"
#include "fran/specfun.hpp"

/// Closed-form and quadrature evaluation of mode probabilities, coverage
/// probabilities and ergodic rates (nats/s/Hz) for the three access modes.
namespace fran::analytic {

using specfun::QuadratureSettings;

struct ModeMetrics {
    double mode_probability = 0.0;
    std::optional<double> coverage;  // absent for coordination
    double rate = 0.0;
};

// D2D mode.
double d2d_mode_probability(const NetworkParams& p);
double d2d_coverage(const NetworkParams& p);
/// Ei closed form under ln(1 + SIR) ~ ln(SIR); only meaningful for T_d >= 1
/// (see in_high_sir_regime).
double d2d_rate(const NetworkParams& p);

// Nearest F-AP mode.
double fap_mode_probability(const NetworkParams& p);
double nearest_fap_distance_pdf(double r, const NetworkParams& p);
double fap_coverage(const NetworkParams& p, const QuadratureSettings& q = {});
/// Coverage at an arbitrary threshold, other parameters from p.
double fap_coverage_at(double threshold, const NetworkParams& p, const QuadratureSettings& q = {});
double fap_rate(const NetworkParams& p, const QuadratureSettings& q = {});
/// alpha_f = 4 and T_f > 1 only; DomainError otherwise.
double fap_rate_closed(const NetworkParams& p);

// Local distributed coordination mode.
double coord_mode_probability(const NetworkParams& p, const QuadratureSettings& q = {});
double coord_rate(const NetworkParams& p, const QuadratureSettings& q = {});

/// ln(T) Pr(SIR >= T) + int_{ln T}^inf Pr(SIR >= e^theta) dtheta, i.e.
/// E[ln(SIR) 1{SIR >= T}] written through the coverage function.
double conditional_rate_from_coverage(const std::function<double(double)>& coverage, double threshold,
                                      const QuadratureSettings& q = {});

/// The ln(1 + x) ~ ln(x) step behind d2d_rate and fap_rate assumes T >= 1.
inline bool in_high_sir_regime(double threshold) noexcept { return threshold >= 1.0; }

ModeMetrics d2d_metrics(const NetworkParams& p);
ModeMetrics fap_metrics(const NetworkParams& p, const QuadratureSettings& q = {});
ModeMetrics coord_metrics(const NetworkParams& p, const QuadratureSettings& q = {});

}  // namespace fran::analytic
