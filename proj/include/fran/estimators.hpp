#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fran/network_params.hpp"
#include "fran/realization.hpp"
#include "fran/simcore.hpp"

namespace fran::sim {

struct MetricEstimate {
    double mean = 0.0;
    std::size_t trials = 0;
    double half_width_95 = 0.0;  // 1.96 * std / sqrt(trials)
};

/// Per-trial observables recorded for every probe.
enum Observable : std::size_t {
    kD2dCovered,     // SIR of the designated D2D link >= T_d
    kD2dLogRate,     // ln(1 + SIR_d) 1{SIR_d >= T_d}
    kD2dEligible,    // U supports D2D and a content-holding D2D user lies within L_d
    kFapCovered,     // SIR from the nearest cached F-AP >= T_f
    kFapLogRate,     // ln(1 + SIR_f) 1{SIR_f >= T_f}
    kClusterLogRate, // ln(1 + SIR_c), zero for an empty cluster
    kClusterServed,  // cluster non-empty
    kSelectedD2d,    // cascade outcome indicators
    kSelectedFap,
    kSelectedCluster,
    kObservableCount
};

/// Parts of the per-trial work to perform; skipped observables stay zero.
struct Workload {
    bool d2d_link = true;
    bool fap_link = true;
    bool cluster = true;
    bool mode_selection = true;
};

/// First and second moments of the observables over a run.
class Moments {
public:
    static constexpr std::size_t kDim = kObservableCount;

    void add(const std::array<double, kDim>& x);
    void merge(const Moments& other);

    std::size_t trials() const noexcept { return n_; }
    double sum(std::size_t i) const noexcept { return sum_[i]; }
    double mean(std::size_t i) const noexcept { return n_ ? sum_[i] / static_cast<double>(n_) : 0.0; }
    /// Unbiased sample covariance.
    double covariance(std::size_t i, std::size_t j) const noexcept;

    bool operator==(const Moments&) const = default;

private:
    std::size_t n_ = 0;
    std::array<double, kDim> sum_{};
    std::array<double, kDim * kDim> cross_{};
};

/// A parameter set evaluated on a window of radius `window_radius` (0: the
/// sampling window). A smaller window must be a ring boundary of the
/// sampling window and sees the inner rings of the same realization.
struct Probe {
    NetworkParams params;
    double window_radius = 0.0;
};

/// Monte Carlo over `trials` realizations, evaluating every probe on each.
/// Probes must share lambda_u, p and the path-loss exponents; each distinct
/// lambda_f gets its own F-AP tier, all paired with the same user tier (the
/// user streams do not depend on lambda_f, so this equals separate runs).
/// Trial t uses the key derive_key(seed, t); results do not depend on the
/// thread count.
std::vector<Moments> simulate_probes(std::span<const Probe> probes, std::size_t trials, std::uint64_t seed,
                                     const SimulationOptions& options = {}, const Workload& workload = {});
std::vector<Moments> simulate_probes(std::span<const NetworkParams> probes, std::size_t trials, std::uint64_t seed,
                                     const SimulationOptions& options = {}, const Workload& workload = {});

/// Coverage estimate for D2D (designated link) or NearestFap.
MetricEstimate coverage_from(const Moments& m, Mode mode);

struct RateEstimate {
    std::optional<MetricEstimate> estimate;
    std::string diagnostic;  // set when the estimate is absent
};

/// p_x E[ln(1 + SIR) 1{SIR >= T_x}] with p_D from the eligibility fraction,
/// p_F = 1 - p_D P_D and p_C = p_F (1 - P_F) from the empirical factors.
/// Half-width by the delta method.
RateEstimate rate_from(const Moments& m, Mode mode);

struct ModeShares {
    std::array<MetricEstimate, 3> share;  // indexed by Mode
    std::array<std::size_t, 3> count{};
};

/// Fractions of trials in which the cascade selected each mode.
ModeShares mode_shares_from(const Moments& m);

MetricEstimate estimate_coverage(Mode mode, const NetworkParams& p, std::size_t trials, std::uint64_t seed,
                                 const SimulationOptions& options = {});
RateEstimate estimate_rate(Mode mode, const NetworkParams& p, std::size_t trials, std::uint64_t seed,
                           const SimulationOptions& options = {});
ModeShares estimate_mode_shares(const NetworkParams& p, std::size_t trials, std::uint64_t seed,
                                const SimulationOptions& options = {});

/// Records all observables of one probe on one realization.
std::array<double, Moments::kDim> observe(const Realization& real, const NetworkParams& p, const Workload& w);

}  // namespace fran::sim
