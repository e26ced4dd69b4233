#include "fran/analytic.hpp"

#include <cmath>
#include <numbers>

#include "fran/errors.hpp"

namespace fran::analytic {

using specfun::integrate_semi_infinite;
using specfun::interference_constant;
using std::numbers::pi;

namespace {

// beta = lambda_du + (P_f / P_d)^{2/alpha_f} lambda_f
double d2d_interferer_density(const NetworkParams& p) {
    const double delta = 2.0 / p.fap_pathloss_exponent;
    return p.d2d_user_density() + std::pow(p.fap_power / p.d2d_power, delta) * p.fap_density;
}

// Exponent k with P_D(T) = exp(-k T^{2/alpha_f}).
double d2d_coverage_scale(const NetworkParams& p) {
    const double af = p.fap_pathloss_exponent;
    return pi * std::pow(p.d2d_link_distance, 2.0 * p.d2d_pathloss_exponent / af) * d2d_interferer_density(p) *
           interference_constant(af);
}

// (lambda_du / (p_c^F lambda_f)) C(alpha_f) (P_d / P_f)^{2/alpha_f}; the F-AP
// coverage denominator is 1 + rho(T) + this * T^{2/alpha_f}.
double fap_cross_tier_factor(const NetworkParams& p) {
    const double af = p.fap_pathloss_exponent;
    return p.d2d_user_density() / (p.fap_hit_probability() * p.fap_density) * interference_constant(af) *
           std::pow(p.d2d_power / p.fap_power, 2.0 / af);
}

}  // namespace

double d2d_mode_probability(const NetworkParams& p) {
    p.validate();
    const double l = p.d2d_distance_threshold;
    return p.d2d_support_probability *
           -std::expm1(-pi * p.d2d_user_density() * p.d2d_hit_probability() * l * l);
}

double d2d_coverage(const NetworkParams& p) {
    p.validate();
    return std::exp(-d2d_coverage_scale(p) * std::pow(p.d2d_sir_threshold, 2.0 / p.fap_pathloss_exponent));
}

double d2d_rate(const NetworkParams& p) {
    const double mode = d2d_mode_probability(p);
    const double t = p.d2d_sir_threshold;
    if (!(t > 0.0)) throw DomainError("D2D rate needs T_d > 0");
    if (mode == 0.0) return 0.0;
    const double af = p.fap_pathloss_exponent;
    const double arg = -std::pow(t, 2.0 / af) * d2d_coverage_scale(p);
    return mode * std::log(t) * d2d_coverage(p) - mode * (af / 2.0) * specfun::exp_integral_ei(arg);
}

double fap_mode_probability(const NetworkParams& p) { return 1.0 - d2d_mode_probability(p) * d2d_coverage(p); }

double nearest_fap_distance_pdf(double r, const NetworkParams& p) {
    if (!(r >= 0.0)) throw DomainError("distance must be non-negative");
    p.validate();
    const double lambda = p.fap_density * p.fap_hit_probability();
    return 2.0 * pi * lambda * r * std::exp(-pi * lambda * r * r);
}

double fap_coverage_at(double threshold, const NetworkParams& p, const QuadratureSettings& q) {
    p.validate();
    if (!(threshold >= 0.0)) throw DomainError("SIR threshold must be >= 0");
    if (threshold == 0.0) return 1.0;
    const double af = p.fap_pathloss_exponent;
    if (std::isinf(threshold)) return 0.0;
    const double cross = fap_cross_tier_factor(p) * std::pow(threshold, 2.0 / af);
    return 1.0 / (1.0 + specfun::rho(threshold, af, q) + cross);
}

double fap_coverage(const NetworkParams& p, const QuadratureSettings& q) {
    return fap_coverage_at(p.fap_sir_threshold, p, q);
}

double conditional_rate_from_coverage(const std::function<double(double)>& coverage, double threshold,
                                      const QuadratureSettings& q) {
    if (!(threshold > 0.0)) throw DomainError("threshold must be > 0");
    const double w = std::log(threshold);
    const auto tail = integrate_semi_infinite([&](double theta) { return coverage(std::exp(theta)); }, w, q);
    const double head = w == 0.0 ? 0.0 : w * coverage(threshold);
    return head + tail.value;
}

double fap_rate(const NetworkParams& p, const QuadratureSettings& q) {
    const double mode = fap_mode_probability(p);
    if (mode == 0.0) return 0.0;
    return mode * conditional_rate_from_coverage([&](double t) { return fap_coverage_at(t, p, q); },
                                                 p.fap_sir_threshold, q);
}

double fap_rate_closed(const NetworkParams& p) {
    p.validate();
    if (p.fap_pathloss_exponent != 4.0) throw DomainError("closed-form F-AP rate requires alpha_f = 4");
    const double t = p.fap_sir_threshold;
    if (!(t > 1.0)) throw DomainError("closed-form F-AP rate requires T_f > 1");
    const double load =
        1.0 + p.d2d_user_density() / (p.fap_hit_probability() * p.fap_density) * std::sqrt(p.d2d_power / p.fap_power);
    return 2.0 * fap_mode_probability(p) * (2.0 + std::log(t)) / (pi * std::sqrt(t) * load);
}

double coord_mode_probability(const NetworkParams& p, const QuadratureSettings& q) {
    return fap_mode_probability(p) * (1.0 - fap_coverage(p, q));
}

namespace {

// Laplace exponent of the cached F-APs beyond the cluster radius L:
// 2 pi lambda int_L^inf P s v / (v^a + P s) dv, evaluated as
// 2 pi lambda L^2 k J(k) with k = P s / L^a and J(k) = int_1^inf w / (w^a + k) dw
// so that small s keeps full relative precision.
double outside_cluster_exponent(double ps, double lambda, double radius, double alpha, const QuadratureSettings& q) {
    const double k = ps / std::pow(radius, alpha);
    const auto j = integrate_semi_infinite([k, alpha](double w) { return w / (std::pow(w, alpha) + k); }, 1.0, q);
    return 2.0 * pi * lambda * radius * radius * k * j.value;
}

}  // namespace

double coord_rate(const NetworkParams& p, const QuadratureSettings& q) {
    const double mode = coord_mode_probability(p, q);
    if (mode == 0.0) return 0.0;
    const double af = p.fap_pathloss_exponent;
    const double delta = 2.0 / af;
    const double c = interference_constant(af);
    const double cached = p.fap_hit_probability() * p.fap_density;
    const double d2d_scale = pi * p.d2d_user_density() * c;
    const double fap_scale = pi * cached * c;

    // integrand of int_0^inf (1/s) L_d(s) [e^{-a(s)} - e^{-b(s)}] ds after s = e^t
    const auto integrand = [&](double t) {
        const double s = std::exp(t);
        const double b = fap_scale * std::pow(p.fap_power * s, delta);
        const double a = outside_cluster_exponent(p.fap_power * s, cached, p.cluster_radius, af, q);
        // e^{-a} - e^{-b} without cancellation; a <= b
        const double bracket = -std::exp(-a) * std::expm1(a - b);
        return std::exp(-d2d_scale * std::pow(p.d2d_power * s, delta)) * bracket;
    };
    // split at the scale where the full-plane F-AP exponent b(s) reaches 1
    const double pivot = std::log(std::pow(1.0 / fap_scale, 1.0 / delta) / p.fap_power);
    const double upper = integrate_semi_infinite(integrand, pivot, q).value;
    const double lower = integrate_semi_infinite([&](double u) { return integrand(pivot - u); }, 0.0, q).value;
    return mode * (upper + lower);
}

ModeMetrics d2d_metrics(const NetworkParams& p) {
    return {d2d_mode_probability(p), d2d_coverage(p), d2d_rate(p)};
}

ModeMetrics fap_metrics(const NetworkParams& p, const QuadratureSettings& q) {
    return {fap_mode_probability(p), fap_coverage(p, q), fap_rate(p, q)};
}

ModeMetrics coord_metrics(const NetworkParams& p, const QuadratureSettings& q) {
    return {coord_mode_probability(p, q), std::nullopt, coord_rate(p, q)};
}

}  // namespace fran::analytic
