#pragma once

#include <cstddef>
#include <functional>

namespace fran::specfun {

struct QuadratureSettings {
    double absolute_tolerance = 1e-9;
    double relative_tolerance = 1e-7;
    std::size_t max_subdivisions = 10'000;
    /// Extension of a semi-infinite domain stops once the newest panel adds
    /// less than this fraction of the accumulated integral.
    double truncation_decay_threshold = 1e-10;

    /// Throws DomainError unless all tolerances are positive and
    /// max_subdivisions >= 1.
    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t subdivisions = 0;
};

using Integrand = std::function<double(double)>;

/// Adaptive Simpson over the finite interval [a, b].
QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSettings& q = {});

/// Integral over [a, inf) by panel extension: [a, a+w], then panels of
/// doubling width w, 2w, 4w, ... with w = 1 + |a| (for a >= 0 this is
/// [a, 2a+1], [2a+1, 4a+3], ...). Each panel is integrated adaptively.
/// Throws ConvergenceError carrying the partial sum when the subdivision
/// budget is exhausted.
QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadratureSettings& q = {});

/// Ei(x) = -int_{-x}^inf e^{-t}/t dt for x < 0. Power series for |x| <= 5,
/// continued fraction beyond.
double exp_integral_ei(double x);

/// C(alpha) = 2 pi csc(2 pi / alpha) / alpha, the Laplace-exponent constant of
/// a Rayleigh-faded Poisson field. Requires alpha > 2.
double interference_constant(double alpha);

/// rho(T, alpha) = int_{T^{-2/alpha}}^inf T^{2/alpha} / (1 + v^{alpha/2}) dv,
/// evaluated by quadrature.
double rho(double threshold, double alpha, const QuadratureSettings& q = {});

/// Closed form of rho at alpha = 4: sqrt(T) (pi/2 - arctan(1/sqrt(T))).
double rho_closed_alpha4(double threshold);

}  // namespace fran::specfun
