#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace relaysec {

// Philox 4x32 with 10 rounds: a stateless counter-based generator mapping a
// 128-bit counter and 64-bit key to 128 random bits.  Any (counter, key)
// cell can be evaluated independently, so parallel Monte Carlo partitions
// trials across workers without touching the random stream — results are
// identical for any worker count.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter block(Counter c, Key k) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t(kMul0) * c[0];
            const std::uint64_t p1 = std::uint64_t(kMul1) * c[2];
            const auto hi0 = std::uint32_t(p0 >> 32);
            const auto lo0 = std::uint32_t(p0);
            const auto hi1 = std::uint32_t(p1 >> 32);
            const auto lo1 = std::uint32_t(p1);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        return c;
    }
};

// Two 64-bit words from the block addressed by (key, counter).
inline std::array<std::uint64_t, 2> philox_words(std::uint64_t key,
                                                 Philox4x32::Counter ctr) {
    const auto v = Philox4x32::block(
        ctr, {std::uint32_t(key), std::uint32_t(key >> 32)});
    return {(std::uint64_t(v[0]) << 32) | v[1],
            (std::uint64_t(v[2]) << 32) | v[3]};
}

// Uniform double in [0, 1) from the top 53 bits of a random word.
inline double to_uniform01(std::uint64_t w) {
    return double(w >> 11) * 0x1.0p-53;
}

// Exponential variate with the given mean; log1p keeps the tail exact and
// avoids log(0) since 1-u is always >= 2^-53.
inline double to_exponential(std::uint64_t w, double mean) {
    return -mean * std::log1p(-to_uniform01(w));
}

// Standard-normal pair via Box-Muller.
inline std::pair<double, double> to_gaussian_pair(std::uint64_t w1,
                                                  std::uint64_t w2) {
    const double radius = std::sqrt(-2.0 * std::log1p(-to_uniform01(w1)));
    const double angle = 2.0 * std::numbers::pi * to_uniform01(w2);
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

// SplitMix64 finalizer: derives decorrelated child seeds (per sweep point,
// per derived stream) from one master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace relaysec
