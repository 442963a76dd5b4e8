#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace wzsup {

/// Finalizing mixer of the splitmix64 generator. This exact transform is the
/// portability contract for every pseudo-random stream in the library: any
/// reimplementation (in any language) that reproduces mix64() and the state
/// update in SplitMix64::next() reproduces all discrete codebooks, trial
/// draws and experiment results bit for bit.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// Derives the seed of a child stream from (seed, index).
/// Used for codebook codeword streams, per-trial seeds and per-grid-point
/// seeds; child index spaces never overlap because each derivation level
/// consumes its own index.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(seed + kGolden * (index + 1));
}

/// splitmix64: state += 0x9E3779B97F4A7C15; output = mix64(state).
class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, m) by rejection (unbiased for any m >= 1).
    std::uint64_t next_below(std::uint64_t m) noexcept {
        const std::uint64_t threshold = (0 - m) % m;  // 2^64 mod m
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % m;
        }
    }

    /// Standard normal via Box-Muller on consecutive next_unit() draws.
    /// The second variate of each pair is cached, so a stream of n Gaussians
    /// consumes exactly 2*ceil(n/2) integer draws.
    double next_gaussian() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace wzsup
