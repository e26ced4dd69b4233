#pragma once

#include <cstdint>
#include <limits>

namespace fran {

/// Stafford's variant-13 64-bit finalizer (the SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Key for the child stream `id` of `parent`. Distinct ids give unrelated keys.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t id) noexcept {
    return mix64(parent ^ mix64(id + 0x632be59bd9b4e019ULL));
}

/// Counter-based random stream: output n is mix64(key + n * golden_gamma), so
/// any position is addressable and streams are split by deriving new keys.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept
        : key_(key), counter_(counter) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return at(counter_++); }

    /// Output at absolute position `n` without advancing.
    constexpr result_type at(std::uint64_t n) const noexcept { return mix64(key_ + (n + 1) * kGamma); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; never zero, so safe under log and as a radius fraction.
    double uniform_positive() noexcept { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

    constexpr CounterRng substream(std::uint64_t id) const noexcept { return CounterRng(derive_key(key_, id)); }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace fran
