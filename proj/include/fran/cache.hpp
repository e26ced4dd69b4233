#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "fran/rng.hpp"

namespace fran::cache {

/// Zipf popularity over ranks 1..n with exponent sigma. The cumulative sums
/// are built once (compensated, ascending rank) and shared by all copies.
class ZipfLaw {
public:
    ZipfLaw(double sigma, std::size_t n);

    double sigma() const noexcept { return sigma_; }
    std::size_t size() const noexcept { return n_; }

    double pmf(std::size_t rank) const;
    /// Pr(rank <= k); exactly 1 at k = n.
    double cdf(std::size_t k) const;
    /// Smallest rank whose CDF is >= u, for u in [0, 1).
    std::size_t quantile(double u) const;
    std::size_t sample(CounterRng& rng) const { return quantile(rng.uniform()); }

private:
    double sigma_;
    std::size_t n_;
    std::shared_ptr<const std::vector<double>> cumulative_;  // unnormalized, size n
};

double zipf_pmf(std::size_t rank, double sigma, std::size_t n);
double cache_hit_probability(std::size_t cache_size, double sigma, std::size_t n);

/// Builds the law on every call; prefer ZipfLaw::sample in loops.
std::size_t sample_content_rank(CounterRng& rng, double sigma, std::size_t n);

enum class Tier { D2D, Fap };

/// Content population and the two cache tiers. Requires 0 < C_d < C_f < N
/// and positive Zipf exponents.
class ContentCatalog {
public:
    ContentCatalog(std::size_t content_count, double sigma_d2d, double sigma_fap,
                   std::size_t cache_size_d2d, std::size_t cache_size_fap);

    std::size_t content_count() const noexcept { return n_; }
    double zipf_exponent(Tier t) const noexcept { return t == Tier::D2D ? d2d_.sigma() : fap_.sigma(); }
    std::size_t cache_size(Tier t) const noexcept { return t == Tier::D2D ? cache_d2d_ : cache_fap_; }
    const ZipfLaw& popularity(Tier t) const noexcept { return t == Tier::D2D ? d2d_ : fap_; }
    /// p_c^x: probability the requested content is among the top C_x ranks.
    double hit_probability(Tier t) const noexcept { return t == Tier::D2D ? hit_d2d_ : hit_fap_; }

    bool operator==(const ContentCatalog& o) const noexcept {
        return n_ == o.n_ && d2d_.sigma() == o.d2d_.sigma() && fap_.sigma() == o.fap_.sigma() &&
               cache_d2d_ == o.cache_d2d_ && cache_fap_ == o.cache_fap_;
    }

private:
    std::size_t n_;
    ZipfLaw d2d_;
    ZipfLaw fap_;
    std::size_t cache_d2d_;
    std::size_t cache_fap_;
    double hit_d2d_;
    double hit_fap_;
};

}  // namespace fran::cache
