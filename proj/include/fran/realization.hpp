#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "fran/cache.hpp"
#include "fran/errors.hpp"
#include "fran/geometry.hpp"
#include "fran/network_params.hpp"

namespace fran::sim {

/// How node caches relate to the request. IndependentThinning marks every node
/// with an independent hit of probability p_c^x; IdenticalCache gives every
/// node of a tier the same top-C_x set, so a hit is rank <= C_x.
enum class Placement { IndependentThinning, IdenticalCache };

struct SimulationOptions {
    double window_radius = 2000.0;  // m
    Placement placement = Placement::IndependentThinning;
    unsigned threads = 0;  // 0: hardware concurrency
    /// D2D users in rings starting at or beyond this radius are kept only as
    /// per-ring interference sums. Infinity materializes every user.
    double materialize_radius = std::numeric_limits<double>::infinity();
    /// Same for F-APs; folded F-AP rings also keep the sum over content-holding
    /// nodes for each content threshold the tier was sampled with.
    double fap_materialize_radius = std::numeric_limits<double>::infinity();
};

/// A query needed nodes that were folded into per-ring sums.
class FoldedRegionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Draws attached to the desired user U at the origin.
struct UserDraws {
    double d2d_support = 0.0;  // U supports D2D iff < p
    double rank_d2d = 0.0;     // quantile of the D2D-tier popularity law
    double rank_fap = 0.0;     // quantile of the F-AP-tier popularity law
    double designated_angle = 0.0;
    double designated_fading = 1.0;  // h_d of the known-location D2D link
};

/// Ring whose nodes were not materialized: count and sum of g r^{-alpha}
/// for each of the realization's two path-loss exponents.
struct FoldedRing {
    std::size_t count = 0;
    std::array<double, 2> gain_sum{};
    /// Sum at the second exponent over nodes whose content draw is below
    /// fold_thresholds[j] of the tier.
    std::vector<double> cached_sum;
    bool operator==(const FoldedRing&) const = default;
};

/// Transmitters of one tier with the marks of their links to U.
struct TierNodes {
    geometry::PointField field;
    std::vector<double> fading;         // unit-mean exponential power fading
    std::vector<double> content_draws;  // uniform [0,1); hit iff < p_c under thinning
    /// End index of each materialized sampling ring (see ring_boundaries);
    /// points are stored ring by ring. Empty means one ring covering the window.
    std::vector<std::size_t> ring_ends;
    /// Rings past the materialized ones, innermost first.
    std::vector<FoldedRing> folded;
    std::vector<double> fold_thresholds;

    bool operator==(const TierNodes&) const = default;
};

/// Per-node content predicate for one parameter set, hoisted out of loops.
struct ContentTest {
    bool identical = false;
    bool hit = false;        // identical caches: the request is in every cache
    double threshold = 0.0;  // thinning: hit iff draw < p_c
    const double* draws = nullptr;
    bool operator()(std::size_t i) const noexcept { return identical ? hit : draws[i] < threshold; }
};

/// One sampled snapshot. Every quantity is reproducible from the seed; the
/// common-user positions are materialized on demand from their own substream.
/// Aggregate interference sums are memoized, so a Realization must not be
/// shared between threads.
class Realization {
public:
    /// `alphas` are the exponents the folded sums were taken at (alpha_d, alpha_f).
    Realization(TierNodes faps, TierNodes d2d_users, UserDraws user, Placement placement, std::uint64_t seed = 0,
                std::vector<std::size_t> common_user_ring_counts = {}, double user_density = 0.0,
                double d2d_support_probability = 0.0, std::array<double, 2> alphas = {4.0, 4.0});

    const geometry::PointField& faps() const noexcept { return faps_.field; }
    /// Materialized D2D users only; see d2d_user_count for the full tier.
    const geometry::PointField& d2d_users() const noexcept { return d2d_.field; }
    const TierNodes& fap_nodes() const noexcept { return faps_; }
    const TierNodes& d2d_nodes() const noexcept { return d2d_; }
    const UserDraws& user() const noexcept { return user_; }
    Placement placement() const noexcept { return placement_; }
    std::uint64_t seed() const noexcept { return seed_; }
    double window_radius() const noexcept { return faps_.field.window_radius(); }

    std::size_t d2d_user_count() const noexcept;
    std::size_t common_user_count() const noexcept;
    geometry::PointField common_users() const;

    /// Index ranges [begin, end) of the materialized rings in ascending radius.
    std::vector<std::pair<std::size_t, std::size_t>> fap_rings() const { return rings_of(faps_); }
    std::vector<std::pair<std::size_t, std::size_t>> d2d_rings() const { return rings_of(d2d_); }
    /// Length of the leading run of points that holds every point with
    /// radius <= r. Throws FoldedRegionError if such points may have been folded.
    std::size_t fap_prefix(double r) const { return prefix_of(faps_, r); }
    std::size_t d2d_prefix(double r) const { return prefix_of(d2d_, r); }

    bool user_supports_d2d(const NetworkParams& p) const noexcept {
        return user_.d2d_support < p.d2d_support_probability;
    }
    std::size_t requested_rank(cache::Tier tier, const cache::ContentCatalog& catalog) const;
    bool fap_has_content(std::size_t i, const NetworkParams& p) const;
    bool d2d_has_content(std::size_t i, const NetworkParams& p) const;
    ContentTest fap_content(const NetworkParams& p) const;
    ContentTest d2d_content(const NetworkParams& p) const;

    /// g r^{-alpha} for each materialized F-AP / D2D user (fading times path gain).
    std::span<const double> fap_gains(double alpha) const;
    std::span<const double> d2d_gains(double alpha) const;
    /// Sum of g r^{-alpha} over the whole tier, folded rings included.
    double d2d_gain_total(double alpha) const;
    double fap_gain_total(double alpha) const;
    /// Per folded F-AP ring, the gain sum at alpha_f over F-APs holding the
    /// content requested under p; empty when nothing was folded.
    std::vector<double> fap_folded_cached(const NetworkParams& p) const;
    bool fap_folded() const noexcept { return !faps_.folded.empty(); }
    /// d2d_gain_total with the materialized user `skip` left out.
    double d2d_gain_total_without(double alpha, std::size_t skip) const;

    /// The same realization seen through the smaller window `radius`, which
    /// must be one of this realization's ring boundaries.
    Realization restricted(double radius) const;

    bool operator==(const Realization& o) const {
        return faps_ == o.faps_ && d2d_ == o.d2d_ && user_.d2d_support == o.user_.d2d_support &&
               user_.rank_d2d == o.user_.rank_d2d && user_.rank_fap == o.user_.rank_fap &&
               user_.designated_angle == o.user_.designated_angle &&
               user_.designated_fading == o.user_.designated_fading && common_ring_counts_ == o.common_ring_counts_;
    }

private:
    struct GainCache {
        double alpha = 0.0;
        std::vector<double> gains;
        double total = 0.0;
    };
    std::vector<std::pair<std::size_t, std::size_t>> rings_of(const TierNodes& n) const;
    std::size_t prefix_of(const TierNodes& n, double r) const;
    const GainCache& gains_for(const TierNodes& nodes, std::vector<GainCache>& cache, double alpha) const;

    TierNodes faps_;
    TierNodes d2d_;
    UserDraws user_;
    Placement placement_;
    std::uint64_t seed_;
    std::vector<double> ring_bounds_;
    std::vector<std::size_t> common_ring_counts_;
    double user_density_;
    double d2d_support_probability_;
    std::array<double, 2> alphas_;
    mutable std::vector<GainCache> fap_cache_;
    mutable std::vector<GainCache> d2d_cache_;
};

/// r^{-alpha} with a fast path for alpha = 4. Throws GeometryError at r = 0.
double path_gain(double r, double alpha);

/// Ring boundaries used to tile the window: 250 * 2^k m, clipped at the
/// window radius. Nested windows therefore share their inner rings.
std::vector<double> ring_boundaries(double window_radius);

/// Samples Phi_f at lambda_f and Phi_u at lambda_u (split into D2D and
/// common users with probability p), plus fading and cache marks and the
/// desired user's draws. Same (params, seed, options) gives an identical
/// result; materialize_radius changes only what is stored, not the sums.
Realization realize_network(const NetworkParams& p, std::uint64_t seed, const SimulationOptions& options = {});

/// The parts of realize_network. The user tier does not depend on lambda_f,
/// so it can be sampled once and paired with several F-AP tiers.
struct UserTier {
    TierNodes d2d;
    std::vector<std::size_t> common_ring_counts;
    UserDraws user;
};
UserTier sample_user_tier(const NetworkParams& p, std::uint64_t seed, const SimulationOptions& options);
/// `content_thresholds` are the p_c^F values folded rings keep cached sums
/// for; empty means p's own.
TierNodes sample_fap_tier(const NetworkParams& p, std::uint64_t seed, const SimulationOptions& options,
                          std::span<const double> content_thresholds = {});
Realization assemble(const NetworkParams& p, std::uint64_t seed, const SimulationOptions& options, TierNodes faps,
                     UserTier users);

}  // namespace fran::sim
