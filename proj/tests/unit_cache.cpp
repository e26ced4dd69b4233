#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fran/cache.hpp"
#include "fran/errors.hpp"

using namespace fran;
using namespace fran::cache;

TEST_CASE("zipf pmf examples") {
    CHECK(zipf_pmf(1, 0.8, 1) == 1.0);
    CHECK(zipf_pmf(1, 1.0, 2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(zipf_pmf(2, 1.0, 2) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    for (std::size_t i = 1; i < 1000; ++i) CHECK(zipf_pmf(i, 0.8, 1000) > zipf_pmf(i + 1, 0.8, 1000));
}

TEST_CASE("zipf normalization") {
    for (std::size_t n : {10u, 1000u, 100000u})
        for (double s : {0.5, 0.8, 1.0, 1.5}) {
            ZipfLaw law(s, n);
            long double sum = 0;
            for (std::size_t i = 1; i <= n; ++i) sum += law.pmf(i);
            CHECK(std::abs(static_cast<double>(sum) - 1.0) < 1e-12);
            CHECK(law.cdf(n) == 1.0);
        }
}

TEST_CASE("cache hit probability") {
    CHECK(cache_hit_probability(1000, 0.8, 1000) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cache_hit_probability(1, 1.0, 2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    long double num = 0, den = 0;
    for (int k = 1; k <= 1000; ++k) {
        const long double w = std::pow(static_cast<long double>(k), -0.8L);
        den += w;
        if (k <= 50) num += w;
    }
    const double hit = cache_hit_probability(50, 0.8, 1000);
    CHECK(hit > 0.0);
    CHECK(hit < 1.0);
    CHECK(hit == doctest::Approx(static_cast<double>(num / den)).epsilon(1e-13));
    for (std::size_t c = 1; c < 1000; ++c) CHECK(cache_hit_probability(c, 0.8, 1000) < cache_hit_probability(c + 1, 0.8, 1000));
    CHECK(cache_hit_probability(1, 0.5, 1000) < cache_hit_probability(1, 1.0, 1000));
    CHECK(cache_hit_probability(1, 1.0, 1000) < cache_hit_probability(1, 1.5, 1000));
}

TEST_CASE("rank sampling") {
    CounterRng one(3);
    for (int i = 0; i < 100; ++i) CHECK(sample_content_rank(one, 1.3, 1) == 1);

    const int n = 1'000'000;
    ZipfLaw two(1.0, 2);
    CounterRng rng(11);
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += two.sample(rng) == 1;
    const double se = std::sqrt(2.0 / 9 / n);
    CHECK(std::abs(ones / double(n) - 2.0 / 3) < 3 * se);

    ZipfLaw law(0.8, 1000);
    std::vector<std::size_t> counts(1001, 0);
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const auto r = law.sample(rng);
        REQUIRE(r >= 1);
        REQUIRE(r <= 1000);
        ++counts[r];
        hits += r <= 50;
    }
    const double ph = cache_hit_probability(50, 0.8, 1000);
    CHECK(std::abs(hits / double(n) - ph) < 3 * std::sqrt(ph * (1 - ph) / n));
    double ks = 0, acc = 0;
    for (std::size_t k = 1; k <= 1000; ++k) {
        acc += counts[k];
        ks = std::max(ks, std::abs(acc / n - law.cdf(k)));
    }
    CHECK(ks < 0.005);
}

TEST_CASE("quantile edges") {
    ZipfLaw law(1.0, 10);
    CHECK(law.quantile(0.0) == 1);
    CHECK(law.quantile(std::nextafter(1.0, 0.0)) == 10);
    CHECK(law.quantile(law.cdf(3)) == 3);
}

TEST_CASE("catalog preconditions") {
    CHECK_THROWS_AS(ContentCatalog(1000, 0.8, 1.0, 400, 50), DomainError);
    CHECK_THROWS_AS(ContentCatalog(1000, 0.8, 1.0, 50, 1000), DomainError);
    CHECK_THROWS_AS(ContentCatalog(1000, 0.0, 1.0, 50, 400), DomainError);
    ContentCatalog c(1000, 0.8, 1.0, 50, 400);
    CHECK(c.hit_probability(Tier::D2D) == cache_hit_probability(50, 0.8, 1000));
    CHECK(c.hit_probability(Tier::Fap) == cache_hit_probability(400, 1.0, 1000));
}
