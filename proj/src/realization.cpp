#include "fran/realization.hpp"

#include <algorithm>
#include <boost/random/exponential_distribution.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fran/errors.hpp"

namespace fran::sim {

namespace {

enum Stream : std::uint64_t { kFapStream = 1, kUserStream = 2, kCommonStream = 3, kDesiredUserStream = 4 };
// per-ring substreams, so skipping one quantity leaves the others unchanged
enum RingStream : std::uint64_t { kRadius = 1, kAngle = 2, kFading = 3, kContent = 4 };

constexpr double kInnermostRing = 250.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_nodes(const TierNodes& n, const char* name) {
    if (n.fading.size() != n.field.size() || n.content_draws.size() != n.field.size()) {
        throw DomainError(std::string(name) + ": mark vectors must match the point count");
    }
    if (!n.ring_ends.empty() && n.ring_ends.back() != n.field.size()) {
        throw DomainError(std::string(name) + ": ring ends must close at the point count");
    }
    if (!n.folded.empty() && n.ring_ends.empty() && !n.field.empty()) {
        throw DomainError(std::string(name) + ": folded rings need explicit ring ends");
    }
}

std::size_t alpha_slot(const std::array<double, 2>& alphas, double alpha) {
    if (alpha == alphas[0]) return 0;
    if (alpha == alphas[1]) return 1;
    throw DomainError("folded interference sums were not taken at path-loss exponent " + std::to_string(alpha));
}

double radius_draw(double inner2, double span2, double outer, CounterRng& rng) {
    // inverse transform of F(r) = (r^2 - r_in^2) / (r_out^2 - r_in^2)
    return std::min(std::sqrt(inner2 + span2 * rng.uniform_positive()), outer);
}

// Samples `n` nodes of one ring into `nodes`, or folds them when `fold`.
void sample_ring(TierNodes& nodes, std::vector<geometry::Point>& pts, std::size_t n, double lo, double hi,
                 const CounterRng& ring, bool fold, const std::array<double, 2>& alphas) {
    CounterRng radius = ring.substream(kRadius);
    CounterRng fading = ring.substream(kFading);
    boost::random::exponential_distribution<double> exp1(1.0);
    const double inner2 = lo * lo, span2 = hi * hi - inner2;
    if (fold) {
        FoldedRing f;
        f.count = n;
        const auto& thresholds = nodes.fold_thresholds;
        f.cached_sum.assign(thresholds.size(), 0.0);
        CounterRng content = ring.substream(kContent);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = radius_draw(inner2, span2, hi, radius);
            const double h = exp1(fading);
            const double g0 = h * path_gain(r, alphas[0]);
            const double g1 = alphas[1] == alphas[0] ? g0 : h * path_gain(r, alphas[1]);
            f.gain_sum[0] += g0;
            f.gain_sum[1] += g1;
            if (thresholds.empty()) continue;
            const double u = content.uniform();
            for (std::size_t j = 0; j < thresholds.size(); ++j) {
                if (u < thresholds[j]) f.cached_sum[j] += g1;
            }
        }
        nodes.folded.push_back(std::move(f));
        return;
    }
    CounterRng angle = ring.substream(kAngle);
    CounterRng content = ring.substream(kContent);
    pts.reserve(pts.size() + n);
    nodes.fading.reserve(nodes.fading.size() + n);
    nodes.content_draws.reserve(nodes.content_draws.size() + n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = radius_draw(inner2, span2, hi, radius);
        pts.push_back({r, kTwoPi * angle.uniform()});
        nodes.fading.push_back(exp1(fading));
        nodes.content_draws.push_back(content.uniform());
    }
    nodes.ring_ends.push_back(pts.size());
}

}  // namespace

double path_gain(double r, double alpha) {
    if (!(r > 0.0)) throw GeometryError("transmitter coincides with the receiver at the origin");
    if (alpha == 4.0) {
        const double r2 = r * r;
        return 1.0 / (r2 * r2);
    }
    return std::pow(r, -alpha);
}

std::vector<double> ring_boundaries(double window_radius) {
    if (!(window_radius > 0.0) || std::isinf(window_radius)) throw DomainError("window radius must be positive and finite");
    std::vector<double> b{0.0};
    double r = kInnermostRing;
    while (r < window_radius) {
        b.push_back(r);
        r *= 2.0;
    }
    b.push_back(window_radius);
    return b;
}

Realization::Realization(TierNodes faps, TierNodes d2d_users, UserDraws user, Placement placement,
                         std::uint64_t seed, std::vector<std::size_t> common_user_ring_counts,
                         double user_density, double d2d_support_probability, std::array<double, 2> alphas)
    : faps_(std::move(faps)),
      d2d_(std::move(d2d_users)),
      user_(user),
      placement_(placement),
      seed_(seed),
      common_ring_counts_(std::move(common_user_ring_counts)),
      user_density_(user_density),
      d2d_support_probability_(d2d_support_probability),
      alphas_(alphas) {
    check_nodes(faps_, "faps");
    check_nodes(d2d_, "d2d users");
    if (faps_.field.window_radius() != d2d_.field.window_radius()) {
        throw DomainError("F-AP and D2D fields must share the window");
    }
    if (!faps_.ring_ends.empty() || !d2d_.ring_ends.empty()) {
        ring_bounds_ = ring_boundaries(faps_.field.window_radius());
        for (const TierNodes* n : {&faps_, &d2d_}) {
            if (!n->ring_ends.empty() && n->ring_ends.size() + n->folded.size() + 1 != ring_bounds_.size()) {
                throw DomainError("ring layout does not match the window");
            }
        }
    }
}

std::vector<std::pair<std::size_t, std::size_t>> Realization::rings_of(const TierNodes& n) const {
    if (n.ring_ends.empty()) return {{0, n.field.size()}};
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t begin = 0;
    for (std::size_t end : n.ring_ends) {
        out.emplace_back(begin, end);
        begin = end;
    }
    return out;
}

std::size_t Realization::prefix_of(const TierNodes& n, double r) const {
    if (n.ring_ends.empty()) return n.field.size();
    for (std::size_t k = 0; k < n.ring_ends.size(); ++k) {
        if (ring_bounds_[k + 1] > r) return n.ring_ends[k];
    }
    if (!n.folded.empty()) throw FoldedRegionError("query radius reaches rings that were not materialized");
    return n.field.size();
}

std::size_t Realization::d2d_user_count() const noexcept {
    std::size_t n = d2d_.field.size();
    for (const auto& f : d2d_.folded) n += f.count;
    return n;
}

std::size_t Realization::common_user_count() const noexcept {
    std::size_t n = 0;
    for (auto c : common_ring_counts_) n += c;
    return n;
}

geometry::PointField Realization::common_users() const {
    const double window = window_radius() > 0.0 ? window_radius() : 1.0;
    const auto rings = ring_boundaries(window);
    std::vector<geometry::Point> pts;
    const CounterRng base(derive_key(seed_, kCommonStream));
    for (std::size_t k = 0; k < common_ring_counts_.size() && k + 1 < rings.size(); ++k) {
        CounterRng rng = base.substream(k);
        geometry::append_uniform_annulus(pts, common_ring_counts_[k], rings[k], rings[k + 1], rng);
    }
    return geometry::PointField(window, (1.0 - d2d_support_probability_) * user_density_, std::move(pts));
}

std::size_t Realization::requested_rank(cache::Tier tier, const cache::ContentCatalog& catalog) const {
    return catalog.popularity(tier).quantile(tier == cache::Tier::D2D ? user_.rank_d2d : user_.rank_fap);
}

ContentTest Realization::fap_content(const NetworkParams& p) const {
    if (placement_ == Placement::IdenticalCache) {
        return {true, requested_rank(cache::Tier::Fap, p.catalog) <= p.catalog.cache_size(cache::Tier::Fap), 0.0,
                nullptr};
    }
    return {false, false, p.fap_hit_probability(), faps_.content_draws.data()};
}

ContentTest Realization::d2d_content(const NetworkParams& p) const {
    if (placement_ == Placement::IdenticalCache) {
        return {true, requested_rank(cache::Tier::D2D, p.catalog) <= p.catalog.cache_size(cache::Tier::D2D), 0.0,
                nullptr};
    }
    return {false, false, p.d2d_hit_probability(), d2d_.content_draws.data()};
}

bool Realization::fap_has_content(std::size_t i, const NetworkParams& p) const { return fap_content(p)(i); }
bool Realization::d2d_has_content(std::size_t i, const NetworkParams& p) const { return d2d_content(p)(i); }

const Realization::GainCache& Realization::gains_for(const TierNodes& nodes, std::vector<GainCache>& cache,
                                                     double alpha) const {
    for (const auto& c : cache) {
        if (c.alpha == alpha) return c;
    }
    GainCache c;
    c.alpha = alpha;
    c.gains.resize(nodes.field.size());
    const auto pts = nodes.field.points();
    // ring by ring, so a restricted window reproduces the same partial sums
    for (auto [begin, end] : rings_of(nodes)) {
        double ring = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            c.gains[i] = nodes.fading[i] * path_gain(pts[i].radius, alpha);
            ring += c.gains[i];
        }
        c.total += ring;
    }
    if (!nodes.folded.empty()) {
        const std::size_t slot = alpha_slot(alphas_, alpha);
        for (const auto& f : nodes.folded) c.total += f.gain_sum[slot];
    }
    cache.push_back(std::move(c));
    return cache.back();
}

std::span<const double> Realization::fap_gains(double alpha) const { return gains_for(faps_, fap_cache_, alpha).gains; }
std::span<const double> Realization::d2d_gains(double alpha) const { return gains_for(d2d_, d2d_cache_, alpha).gains; }
double Realization::fap_gain_total(double alpha) const { return gains_for(faps_, fap_cache_, alpha).total; }
double Realization::d2d_gain_total(double alpha) const { return gains_for(d2d_, d2d_cache_, alpha).total; }

std::vector<double> Realization::fap_folded_cached(const NetworkParams& p) const {
    std::vector<double> out;
    if (faps_.folded.empty()) return out;
    if (p.fap_pathloss_exponent != alphas_[1]) {
        throw DomainError("folded F-AP sums were not taken at path-loss exponent " +
                          std::to_string(p.fap_pathloss_exponent));
    }
    const ContentTest has = fap_content(p);
    out.reserve(faps_.folded.size());
    if (has.identical) {
        for (const auto& f : faps_.folded) out.push_back(has.hit ? f.gain_sum[1] : 0.0);
        return out;
    }
    const auto& t = faps_.fold_thresholds;
    const auto it = std::find(t.begin(), t.end(), has.threshold);
    if (it == t.end()) throw FoldedRegionError("folded F-AP rings hold no sums for this cache hit probability");
    const auto j = static_cast<std::size_t>(it - t.begin());
    for (const auto& f : faps_.folded) out.push_back(f.cached_sum[j]);
    return out;
}

double Realization::d2d_gain_total_without(double alpha, std::size_t skip) const {
    const auto g = d2d_gains(alpha);
    if (skip >= g.size()) throw DomainError("D2D user index out of range");
    double total = 0.0;
    for (auto [begin, end] : rings_of(d2d_)) {
        double ring = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            if (i != skip) ring += g[i];
        }
        total += ring;
    }
    if (!d2d_.folded.empty()) {
        const std::size_t slot = alpha_slot(alphas_, alpha);
        for (const auto& f : d2d_.folded) total += f.gain_sum[slot];
    }
    return total;
}

Realization Realization::restricted(double radius) const {
    if (radius == window_radius()) return *this;
    const auto it = std::find(ring_bounds_.begin(), ring_bounds_.end(), radius);
    if (radius <= 0.0 || it == ring_bounds_.end()) {
        throw DomainError("restricted window must be a ring boundary of the sampled window");
    }
    const std::size_t rings = static_cast<std::size_t>(it - ring_bounds_.begin());
    auto cut = [&](const TierNodes& n) {
        TierNodes out;
        const std::size_t kept = std::min(rings, n.ring_ends.size());
        const std::size_t end = kept ? n.ring_ends[kept - 1] : 0;
        const auto pts = n.field.points();
        out.field = geometry::PointField(radius, n.field.density(), {pts.begin(), pts.begin() + end});
        out.fading.assign(n.fading.begin(), n.fading.begin() + end);
        out.content_draws.assign(n.content_draws.begin(), n.content_draws.begin() + end);
        out.ring_ends.assign(n.ring_ends.begin(), n.ring_ends.begin() + kept);
        out.folded.assign(n.folded.begin(), n.folded.begin() + (rings - kept));
        out.fold_thresholds = n.fold_thresholds;
        return out;
    };
    std::vector<std::size_t> common(common_ring_counts_.begin(),
                                    common_ring_counts_.begin() + std::min(rings, common_ring_counts_.size()));
    return Realization(cut(faps_), cut(d2d_), user_, placement_, seed_, std::move(common), user_density_,
                       d2d_support_probability_, alphas_);
}

TierNodes sample_fap_tier(const NetworkParams& p, std::uint64_t seed, const SimulationOptions& options,
                          std::span<const double> content_thresholds) {
    const auto rings = ring_boundaries(options.window_radius);
    const std::array<double, 2> alphas{p.d2d_pathloss_exponent, p.fap_pathloss_exponent};
    const CounterRng base(derive_key(seed, kFapStream));
    TierNodes faps;
    if (content_thresholds.empty()) {
        faps.fold_thresholds = {p.fap_hit_probability()};
    } else {
        faps.fold_thresholds.assign(content_thresholds.begin(), content_thresholds.end());
    }
    std::vector<geometry::Point> pts;
    for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
        const CounterRng ring = base.substream(k);
        CounterRng count = ring;
        const std::size_t n = geometry::poisson_count(p.fap_density, rings[k], rings[k + 1], count);
        const bool fold = rings[k] >= options.fap_materialize_radius || !faps.folded.empty();
        sample_ring(faps, pts, n, rings[k], rings[k + 1], ring, fold, alphas);
    }
    faps.field = geometry::PointField(options.window_radius, p.fap_density, std::move(pts));
    return faps;
}

UserTier sample_user_tier(const NetworkParams& p, std::uint64_t seed, const SimulationOptions& options) {
    const auto rings = ring_boundaries(options.window_radius);
    const std::array<double, 2> alphas{p.d2d_pathloss_exponent, p.fap_pathloss_exponent};
    const CounterRng base(derive_key(seed, kUserStream));
    UserTier out;
    std::vector<geometry::Point> pts;
    for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
        const CounterRng ring = base.substream(k);
        // Marking Phi_u point by point is equal in law to a binomial split of
        // the ring count with i.i.d. positions for each part.
        CounterRng count = ring;
        const std::size_t users = geometry::poisson_count(p.user_density, rings[k], rings[k + 1], count);
        const std::size_t n =
            users == 0 ? 0
                       : static_cast<std::size_t>(std::binomial_distribution<long long>(
                             static_cast<long long>(users), p.d2d_support_probability)(count));
        out.common_ring_counts.push_back(users - n);
        const bool fold = rings[k] >= options.materialize_radius || !out.d2d.folded.empty();
        sample_ring(out.d2d, pts, n, rings[k], rings[k + 1], ring, fold, alphas);
    }
    out.d2d.field = geometry::PointField(options.window_radius, p.d2d_user_density(), std::move(pts));

    CounterRng urng(derive_key(seed, kDesiredUserStream));
    boost::random::exponential_distribution<double> exp1(1.0);
    out.user.d2d_support = urng.uniform();
    out.user.rank_d2d = urng.uniform();
    out.user.rank_fap = urng.uniform();
    out.user.designated_angle = kTwoPi * urng.uniform();
    out.user.designated_fading = exp1(urng);
    return out;
}

Realization assemble(const NetworkParams& p, std::uint64_t seed, const SimulationOptions& options, TierNodes faps,
                     UserTier users) {
    return Realization(std::move(faps), std::move(users.d2d), users.user, options.placement, seed,
                       std::move(users.common_ring_counts), p.user_density, p.d2d_support_probability,
                       {p.d2d_pathloss_exponent, p.fap_pathloss_exponent});
}

Realization realize_network(const NetworkParams& p, std::uint64_t seed, const SimulationOptions& options) {
    p.validate();
    return assemble(p, seed, options, sample_fap_tier(p, seed, options), sample_user_tier(p, seed, options));
}

}  // namespace fran::sim
