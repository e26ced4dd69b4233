#include "fran/network_params.hpp"

#include <cmath>
#include <string>

#include "fran/errors.hpp"

namespace fran {

namespace {
void require(bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("invalid network parameters: ") + what);
}
}  // namespace

void NetworkParams::validate() const {
    require(fap_density > 0.0 && std::isfinite(fap_density), "fap_density must be > 0");
    require(user_density > 0.0 && std::isfinite(user_density), "user_density must be > 0");
    require(d2d_support_probability >= 0.0 && d2d_support_probability <= 1.0,
            "d2d_support_probability must lie in [0, 1]");
    require(d2d_power > 0.0 && std::isfinite(d2d_power), "d2d_power must be > 0");
    require(fap_power > 0.0 && std::isfinite(fap_power), "fap_power must be > 0");
    require(d2d_pathloss_exponent > 2.0 && std::isfinite(d2d_pathloss_exponent), "d2d_pathloss_exponent must be > 2");
    require(fap_pathloss_exponent > 2.0 && std::isfinite(fap_pathloss_exponent), "fap_pathloss_exponent must be > 2");
    require(d2d_sir_threshold >= 0.0, "d2d_sir_threshold must be >= 0");
    require(fap_sir_threshold >= 0.0, "fap_sir_threshold must be >= 0");
    require(d2d_distance_threshold > 0.0, "d2d_distance_threshold must be > 0");
    require(cluster_radius > 0.0, "cluster_radius must be > 0");
    require(d2d_link_distance > 0.0, "d2d_link_distance must be > 0");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace fran
