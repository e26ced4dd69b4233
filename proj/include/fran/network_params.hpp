#pragma once

#include "fran/cache.hpp"

namespace fran {

/// Scalar model of the F-RAN downlink. Powers are linear (mW) and SIR
/// thresholds linear; dB conversion happens at the config boundary.
struct NetworkParams {
    double fap_density = 2e-4;          // lambda_f, per m^2
    double user_density = 2e-3;         // lambda_u, per m^2
    double d2d_support_probability = 0.5;  // p
    double d2d_power = 1.9952623149688795;  // P_d, mW (3 dBm)
    double fap_power = 199.52623149688787;  // P_f, mW (23 dBm)
    double d2d_pathloss_exponent = 4.0;  // alpha_d
    double fap_pathloss_exponent = 4.0;  // alpha_f
    double d2d_sir_threshold = 1.0;      // T_d
    double fap_sir_threshold = 1.0;      // T_f
    double d2d_distance_threshold = 16.0;  // L_d, m
    double cluster_radius = 50.0;          // L_c, m
    double d2d_link_distance = 10.0;       // |X_d|, m
    cache::ContentCatalog catalog{1000, 0.8, 1.0, 50, 400};

    double d2d_user_density() const noexcept { return d2d_support_probability * user_density; }
    double common_user_density() const noexcept { return (1.0 - d2d_support_probability) * user_density; }
    double d2d_hit_probability() const noexcept { return catalog.hit_probability(cache::Tier::D2D); }
    double fap_hit_probability() const noexcept { return catalog.hit_probability(cache::Tier::Fap); }

    /// Throws DomainError naming the first violated field.
    void validate() const;

    bool operator==(const NetworkParams&) const = default;
};

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace fran
