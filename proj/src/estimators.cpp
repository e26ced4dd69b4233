#include "fran/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "fran/errors.hpp"

namespace fran::sim {

namespace {

constexpr std::size_t kChunk = 512;
constexpr std::size_t kMinTrials = 100;
constexpr double kZ95 = 1.96;

void check_trials(std::size_t trials) {
    if (trials < kMinTrials) throw DomainError("Monte Carlo needs at least 100 trials");
}

// 1.96 sqrt(g' S g / n) for the sample covariance S of the observables.
double delta_half_width(const Moments& m, const std::array<double, Moments::kDim>& grad) {
    double v = 0.0;
    for (std::size_t i = 0; i < Moments::kDim; ++i) {
        if (grad[i] == 0.0) continue;
        for (std::size_t j = 0; j < Moments::kDim; ++j) {
            if (grad[j] != 0.0) v += grad[i] * grad[j] * m.covariance(i, j);
        }
    }
    return kZ95 * std::sqrt(std::max(v, 0.0) / static_cast<double>(m.trials()));
}

MetricEstimate mean_estimate(const Moments& m, std::size_t i) {
    return {m.mean(i), m.trials(),
            kZ95 * std::sqrt(std::max(m.covariance(i, i), 0.0) / static_cast<double>(m.trials()))};
}

}  // namespace

void Moments::add(const std::array<double, kDim>& x) {
    ++n_;
    for (std::size_t i = 0; i < kDim; ++i) {
        sum_[i] += x[i];
        if (x[i] == 0.0) continue;
        for (std::size_t j = i; j < kDim; ++j) cross_[i * kDim + j] += x[i] * x[j];
    }
}

void Moments::merge(const Moments& o) {
    n_ += o.n_;
    for (std::size_t i = 0; i < kDim; ++i) sum_[i] += o.sum_[i];
    for (std::size_t k = 0; k < cross_.size(); ++k) cross_[k] += o.cross_[k];
}

double Moments::covariance(std::size_t i, std::size_t j) const noexcept {
    if (n_ < 2) return 0.0;
    if (i > j) std::swap(i, j);
    const double n = static_cast<double>(n_);
    return (cross_[i * kDim + j] - sum_[i] * sum_[j] / n) / (n - 1.0);
}

std::array<double, Moments::kDim> observe(const Realization& real, const NetworkParams& p, const Workload& w) {
    std::array<double, Moments::kDim> x{};
    if (w.d2d_link) {
        const double s = sir_d2d(real, {}, p);
        if (s >= p.d2d_sir_threshold) {
            x[kD2dCovered] = 1.0;
            x[kD2dLogRate] = std::log1p(s);
        }
        if (real.user_supports_d2d(p)) {
            const auto pts = real.d2d_users().points();
            const ContentTest has = real.d2d_content(p);
            const std::size_t n = real.d2d_prefix(p.d2d_distance_threshold);
            for (std::size_t i = 0; i < n; ++i) {
                if (pts[i].radius <= p.d2d_distance_threshold && has(i)) {
                    x[kD2dEligible] = 1.0;
                    break;
                }
            }
        }
    }
    if (w.fap_link) {
        if (auto f = nearest_cached_fap(real, p)) {
            const double s = sir_fap(real, *f, p);
            if (s >= p.fap_sir_threshold) {
                x[kFapCovered] = 1.0;
                x[kFapLogRate] = std::log1p(s);
            }
        }
    }
    if (w.cluster) {
        if (auto s = sir_cluster(real, cluster_members(real, p), p)) {
            x[kClusterServed] = 1.0;
            x[kClusterLogRate] = std::log1p(*s);
        }
    }
    if (w.mode_selection) {
        switch (select_mode(real, p).mode) {
            case Mode::D2D: x[kSelectedD2d] = 1.0; break;
            case Mode::NearestFap: x[kSelectedFap] = 1.0; break;
            case Mode::Coordination: x[kSelectedCluster] = 1.0; break;
        }
    }
    return x;
}

std::vector<Moments> simulate_probes(std::span<const Probe> probes, std::size_t trials, std::uint64_t seed,
                                     const SimulationOptions& options, const Workload& workload) {
    check_trials(trials);
    if (probes.empty()) throw DomainError("no probes to simulate");
    const NetworkParams& first = probes[0].params;
    double max_link = 0.0;
    for (const auto& probe : probes) {
        const NetworkParams& p = probe.params;
        p.validate();
        if (p.user_density != first.user_density || p.d2d_support_probability != first.d2d_support_probability ||
            p.d2d_pathloss_exponent != first.d2d_pathloss_exponent ||
            p.fap_pathloss_exponent != first.fap_pathloss_exponent) {
            throw DomainError("probes in one run must share lambda_u, p and the path-loss exponents");
        }
        if (probe.window_radius < 0.0 || probe.window_radius > options.window_radius) {
            throw DomainError("probe window must lie within the sampling window");
        }
        max_link = std::max(max_link, p.d2d_distance_threshold);
    }
    // F-AP tiers, one per distinct lambda_f in order of appearance
    std::vector<double> densities;
    std::vector<std::size_t> group(probes.size());
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const double d = probes[k].params.fap_density;
        auto it = std::find(densities.begin(), densities.end(), d);
        group[k] = static_cast<std::size_t>(it - densities.begin());
        if (it == densities.end()) densities.push_back(d);
    }
    SimulationOptions sampling = options;
    // only candidates within L_d and cluster members within L_c are looked up
    // individually; the nearest cached F-AP almost always lies in the first ring
    double max_cluster = 0.0;
    std::vector<std::vector<double>> thresholds(densities.size());
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const NetworkParams& p = probes[k].params;
        max_cluster = std::max(max_cluster, p.cluster_radius);
        auto& t = thresholds[group[k]];
        if (std::find(t.begin(), t.end(), p.fap_hit_probability()) == t.end()) t.push_back(p.fap_hit_probability());
    }
    sampling.materialize_radius = std::min(options.materialize_radius, max_link);
    sampling.fap_materialize_radius = std::min(options.fap_materialize_radius, max_cluster);
    SimulationOptions unfolded = sampling;
    unfolded.fap_materialize_radius = options.fap_materialize_radius;

    const std::size_t chunks = (trials + kChunk - 1) / kChunk;
    std::vector<std::vector<Moments>> slots(chunks, std::vector<Moments>(probes.size()));

    auto run_trial = [&](std::size_t t, std::vector<Moments>& out) {
        const std::uint64_t key = derive_key(seed, t);
        const UserTier users = sample_user_tier(first, key, sampling);
        std::vector<std::array<double, Moments::kDim>> obs(probes.size());
        for (std::size_t g = 0; g < densities.size(); ++g) {
            NetworkParams tier_params = first;
            tier_params.fap_density = densities[g];
            auto observe_group = [&](const SimulationOptions& o) {
                const Realization real =
                    assemble(tier_params, key, o, sample_fap_tier(tier_params, key, o, thresholds[g]), users);
                std::vector<std::pair<double, Realization>> views;
                for (std::size_t k = 0; k < probes.size(); ++k) {
                    if (group[k] != g) continue;
                    const double w = probes[k].window_radius;
                    const Realization* view = &real;
                    if (w > 0.0 && w != real.window_radius()) {
                        auto v = std::find_if(views.begin(), views.end(), [w](const auto& e) { return e.first == w; });
                        if (v == views.end()) {
                            views.emplace_back(w, real.restricted(w));
                            v = views.end() - 1;
                        }
                        view = &v->second;
                    }
                    obs[k] = observe(*view, probes[k].params, workload);
                }
            };
            try {
                observe_group(sampling);
            } catch (const FoldedRegionError&) {
                // the sums are bit-identical either way, so redoing the trial
                // with every F-AP stored changes nothing else
                observe_group(unfolded);
            }
        }
        for (std::size_t k = 0; k < probes.size(); ++k) out[k].add(obs[k]);
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::size_t c = next++; c < chunks; c = next++) {
                const std::size_t end = std::min(trials, (c + 1) * kChunk);
                for (std::size_t t = c * kChunk; t < end; ++t) run_trial(t, slots[c]);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = chunks;
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<Moments> out(probes.size());
    for (const auto& chunk : slots) {
        for (std::size_t k = 0; k < probes.size(); ++k) out[k].merge(chunk[k]);
    }
    return out;
}

std::vector<Moments> simulate_probes(std::span<const NetworkParams> probes, std::size_t trials, std::uint64_t seed,
                                     const SimulationOptions& options, const Workload& workload) {
    std::vector<Probe> wrapped;
    for (const auto& p : probes) wrapped.push_back({p, 0.0});
    return simulate_probes(std::span<const Probe>(wrapped), trials, seed, options, workload);
}

MetricEstimate coverage_from(const Moments& m, Mode mode) {
    switch (mode) {
        case Mode::D2D: return mean_estimate(m, kD2dCovered);
        case Mode::NearestFap: return mean_estimate(m, kFapCovered);
        case Mode::Coordination: break;
    }
    throw DomainError("coverage is not defined for coordination mode");
}

RateEstimate rate_from(const Moments& m, Mode mode) {
    const double pd = m.mean(kD2dEligible), cd = m.mean(kD2dCovered), cf = m.mean(kFapCovered);
    const double pf = 1.0 - pd * cd;
    std::array<double, Moments::kDim> g{};
    double value = 0.0;
    std::size_t passing = 0;
    switch (mode) {
        case Mode::D2D: {
            const double r = m.mean(kD2dLogRate);
            passing = static_cast<std::size_t>(m.sum(kD2dCovered));
            value = pd * r;
            g[kD2dEligible] = r;
            g[kD2dLogRate] = pd;
            break;
        }
        case Mode::NearestFap: {
            const double r = m.mean(kFapLogRate);
            passing = static_cast<std::size_t>(m.sum(kFapCovered));
            value = pf * r;
            g[kD2dEligible] = -cd * r;
            g[kD2dCovered] = -pd * r;
            g[kFapLogRate] = pf;
            break;
        }
        case Mode::Coordination: {
            const double r = m.mean(kClusterLogRate);
            passing = static_cast<std::size_t>(m.sum(kClusterServed));
            value = pf * (1.0 - cf) * r;
            g[kD2dEligible] = -cd * (1.0 - cf) * r;
            g[kD2dCovered] = -pd * (1.0 - cf) * r;
            g[kFapCovered] = -pf * r;
            g[kClusterLogRate] = pf * (1.0 - cf);
            break;
        }
    }
    if (passing == 0) {
        return {std::nullopt, std::string("no ") + to_string(mode) + " sample passed its threshold in " +
                                  std::to_string(m.trials()) + " trials"};
    }
    return {MetricEstimate{value, m.trials(), delta_half_width(m, g)}, {}};
}

ModeShares mode_shares_from(const Moments& m) {
    ModeShares s;
    const std::size_t idx[3] = {kSelectedD2d, kSelectedFap, kSelectedCluster};
    for (std::size_t k = 0; k < 3; ++k) {
        s.share[k] = mean_estimate(m, idx[k]);
        s.count[k] = static_cast<std::size_t>(m.sum(idx[k]));
    }
    return s;
}

MetricEstimate estimate_coverage(Mode mode, const NetworkParams& p, std::size_t trials, std::uint64_t seed,
                                 const SimulationOptions& options) {
    if (mode == Mode::Coordination) throw DomainError("coverage is not defined for coordination mode");
    Workload w{mode == Mode::D2D, mode == Mode::NearestFap, false, false};
    return coverage_from(simulate_probes(std::span(&p, 1), trials, seed, options, w)[0], mode);
}

RateEstimate estimate_rate(Mode mode, const NetworkParams& p, std::size_t trials, std::uint64_t seed,
                           const SimulationOptions& options) {
    Workload w{true, mode != Mode::D2D, mode == Mode::Coordination, false};
    return rate_from(simulate_probes(std::span(&p, 1), trials, seed, options, w)[0], mode);
}

ModeShares estimate_mode_shares(const NetworkParams& p, std::size_t trials, std::uint64_t seed,
                                const SimulationOptions& options) {
    Workload w{false, false, false, true};
    return mode_shares_from(simulate_probes(std::span(&p, 1), trials, seed, options, w)[0]);
}

}  // namespace fran::sim
