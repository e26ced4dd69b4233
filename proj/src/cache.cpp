#include "fran/cache.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fran/errors.hpp"

namespace fran::cache {

ZipfLaw::ZipfLaw(double sigma, std::size_t n) : sigma_(sigma), n_(n) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("Zipf exponent must be > 0");
    if (n < 1) throw DomainError("content count must be >= 1");
    auto cum = std::make_shared<std::vector<double>>(n);
    // Neumaier summation keeps the prefix sums accurate to a few ulps for n ~ 1e6.
    double sum = 0.0, comp = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double w = std::pow(static_cast<double>(k), -sigma);
        const double t = sum + w;
        comp += std::abs(sum) >= std::abs(w) ? (sum - t) + w : (w - t) + sum;
        sum = t;
        (*cum)[k - 1] = sum + comp;
    }
    cumulative_ = std::move(cum);
}

double ZipfLaw::pmf(std::size_t rank) const {
    if (rank < 1 || rank > n_) {
        throw DomainError("rank " + std::to_string(rank) + " outside [1, " + std::to_string(n_) + "]");
    }
    return std::pow(static_cast<double>(rank), -sigma_) / cumulative_->back();
}

double ZipfLaw::cdf(std::size_t k) const {
    if (k < 1 || k > n_) {
        throw DomainError("cache size " + std::to_string(k) + " outside [1, " + std::to_string(n_) + "]");
    }
    return (*cumulative_)[k - 1] / cumulative_->back();
}

std::size_t ZipfLaw::quantile(double u) const {
    const double target = u * cumulative_->back();
    // first k with cum[k-1] > target, i.e. Pr(rank <= k) > u
    const auto it = std::upper_bound(cumulative_->begin(), cumulative_->end(), target);
    const auto idx = static_cast<std::size_t>(it - cumulative_->begin());
    return std::min(idx + 1, n_);
}

double zipf_pmf(std::size_t rank, double sigma, std::size_t n) { return ZipfLaw(sigma, n).pmf(rank); }

double cache_hit_probability(std::size_t cache_size, double sigma, std::size_t n) {
    return ZipfLaw(sigma, n).cdf(cache_size);
}

std::size_t sample_content_rank(CounterRng& rng, double sigma, std::size_t n) {
    return ZipfLaw(sigma, n).sample(rng);
}

ContentCatalog::ContentCatalog(std::size_t content_count, double sigma_d2d, double sigma_fap,
                               std::size_t cache_size_d2d, std::size_t cache_size_fap)
    : n_(content_count),
      d2d_(sigma_d2d, content_count),
      fap_(sigma_fap, content_count),
      cache_d2d_(cache_size_d2d),
      cache_fap_(cache_size_fap) {
    if (!(0 < cache_size_d2d && cache_size_d2d < cache_size_fap && cache_size_fap < content_count)) {
        throw DomainError("catalog requires 0 < C_d < C_f < N (got C_d=" + std::to_string(cache_size_d2d) +
                          ", C_f=" + std::to_string(cache_size_fap) + ", N=" + std::to_string(content_count) +
                          ")");
    }
    hit_d2d_ = d2d_.cdf(cache_d2d_);
    hit_fap_ = fap_.cdf(cache_fap_);
}

}  // namespace fran::cache
