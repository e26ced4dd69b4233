#include "fran/simcore.hpp"

#include <algorithm>
#include <cmath>

#include "fran/errors.hpp"

namespace fran::sim {

const char* to_string(Mode m) noexcept {
    switch (m) {
        case Mode::D2D: return "d2d";
        case Mode::NearestFap: return "nearest_fap";
        case Mode::Coordination: return "coordination";
    }
    return "?";
}

namespace {

double ratio(double signal, double interference) {
    if (interference == 0.0) return signal > 0.0 ? kInfiniteSir : 0.0;
    return signal / interference;
}

// P_num / P_den kept to 36 significant bits. Rescaling both powers moves the
// raw quotient by an ulp; the rounded one does not move.
double power_ratio(double num, double den) {
    int e = 0;
    const double m = std::frexp(num / den, &e);
    return std::ldexp(std::nearbyint(std::ldexp(m, 36)), e - 36);
}

// Sum of content-holding F-AP gains, skipping indices for which skip(i).
template <class Skip>
double cached_fap_sum(const Realization& real, const NetworkParams& p, Skip skip) {
    const auto g = real.fap_gains(p.fap_pathloss_exponent);
    const ContentTest has = real.fap_content(p);
    // ring by ring, matching the folded per-ring sums
    double s = 0.0;
    for (auto [begin, end] : real.fap_rings()) {
        double ring = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            if (has(i) && !skip(i)) ring += g[i];
        }
        s += ring;
    }
    for (double f : real.fap_folded_cached(p)) s += f;
    return s;
}

}  // namespace

double sir_d2d(const Realization& real, D2dTransmitter tx, const NetworkParams& p) {
    // Powers enter only through P_f / P_d, so a common power scale cancels.
    const double power = power_ratio(p.fap_power, p.d2d_power);
    double fading = real.user().designated_fading;
    double d2d_interf = 0.0;
    if (tx.member) {
        const std::size_t m = *tx.member;
        if (m >= real.d2d_users().size()) throw DomainError("serving D2D user index out of range");
        fading = real.d2d_nodes().fading[m];
        d2d_interf = real.d2d_gain_total_without(p.d2d_pathloss_exponent, m);
    } else {
        d2d_interf = real.d2d_gain_total(p.d2d_pathloss_exponent);
    }
    const double signal = fading * path_gain(p.d2d_link_distance, p.d2d_pathloss_exponent);
    return ratio(signal, d2d_interf + power * real.fap_gain_total(p.fap_pathloss_exponent));
}

double sir_fap(const Realization& real, std::size_t serving, const NetworkParams& p) {
    if (serving >= real.faps().size()) throw DomainError("serving F-AP index out of range");
    const double power = power_ratio(p.d2d_power, p.fap_power);
    const double signal = real.fap_gains(p.fap_pathloss_exponent)[serving];
    const double fap_interf = cached_fap_sum(real, p, [serving](std::size_t i) { return i == serving; });
    return ratio(signal, fap_interf + power * real.d2d_gain_total(p.fap_pathloss_exponent));
}

std::optional<double> sir_cluster(const Realization& real, const std::vector<std::size_t>& members,
                                  const NetworkParams& p) {
    if (members.empty()) return std::nullopt;
    const auto g = real.fap_gains(p.fap_pathloss_exponent);
    std::vector<char> in_cluster(g.size(), 0);
    double signal = 0.0;
    for (std::size_t m : members) {
        if (m >= g.size()) throw DomainError("cluster member index out of range");
        if (!in_cluster[m]) signal += g[m];
        in_cluster[m] = 1;
    }
    const double power = power_ratio(p.d2d_power, p.fap_power);
    const double fap_interf = cached_fap_sum(real, p, [&](std::size_t i) { return in_cluster[i] != 0; });
    return ratio(signal, fap_interf + power * real.d2d_gain_total(p.fap_pathloss_exponent));
}

std::vector<std::size_t> cluster_members(const Realization& real, const NetworkParams& p) {
    std::vector<std::size_t> out;
    const auto pts = real.faps().points();
    const std::size_t n = real.fap_prefix(p.cluster_radius);
    const ContentTest has = real.fap_content(p);
    for (std::size_t i = 0; i < n; ++i) {
        if (pts[i].radius <= p.cluster_radius && has(i)) out.push_back(i);
    }
    return out;
}

std::optional<std::size_t> nearest_cached_fap(const Realization& real, const NetworkParams& p) {
    std::optional<std::size_t> best;
    const auto pts = real.faps().points();
    const ContentTest has = real.fap_content(p);
    // rings are radially ordered, so the first ring with a hit holds the nearest
    for (auto [begin, end] : real.fap_rings()) {
        for (std::size_t i = begin; i < end; ++i) {
            if ((!best || pts[i].radius < pts[*best].radius) && has(i)) best = i;
        }
        if (best) break;
    }
    if (!best && real.fap_folded() && (!has.identical || has.hit)) {
        throw FoldedRegionError("no content-holding F-AP among the materialized rings");
    }
    return best;
}

std::vector<std::size_t> d2d_candidates(const Realization& real, const NetworkParams& p) {
    std::vector<std::size_t> out;
    const auto pts = real.d2d_users().points();
    const std::size_t n = real.d2d_prefix(p.d2d_distance_threshold);
    const ContentTest has = real.d2d_content(p);
    for (std::size_t i = 0; i < n; ++i) {
        if (pts[i].radius <= p.d2d_distance_threshold && has(i)) out.push_back(i);
    }
    std::stable_sort(out.begin(), out.end(),
                     [&](std::size_t a, std::size_t b) { return pts[a].radius < pts[b].radius; });
    return out;
}

ModeDecision select_mode(const Realization& real, const NetworkParams& p) {
    if (real.user_supports_d2d(p)) {
        for (std::size_t c : d2d_candidates(real, p)) {
            const double s = sir_d2d(real, {c}, p);
            if (s >= p.d2d_sir_threshold) return {Mode::D2D, {c}, s};
        }
    }
    if (auto f = nearest_cached_fap(real, p)) {
        const double s = sir_fap(real, *f, p);
        if (s >= p.fap_sir_threshold) return {Mode::NearestFap, {*f}, s};
    }
    auto members = cluster_members(real, p);
    auto s = sir_cluster(real, members, p);
    return {Mode::Coordination, std::move(members), s};
}

}  // namespace fran::sim
