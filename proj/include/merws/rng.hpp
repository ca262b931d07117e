#ifndef MERWS_RNG_HPP
#define MERWS_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace merws {

// Name recorded in every output metadata block; changing the generator is a
// format-breaking change for reproducibility.
inline constexpr const char* kGeneratorName = "xoshiro256++";

// 64-bit avalanche mixer (splitmix64 step: golden-gamma increment followed by
// Stafford's mix13 finalizer). Bijective on uint64, so distinct inputs give
// distinct stream seeds.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna). State expanded from a 64-bit seed by
// iterating splitmix64, the seeding procedure recommended by the authors.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) noexcept {
        std::uint64_t z = seed;
        for (auto& word : state_) {
            z += 0x9e3779b97f4a7c15ULL;
            std::uint64_t w = z;
            w = (w ^ (w >> 30)) * 0xbf58476d1ce4e5b9ULL;
            w = (w ^ (w >> 27)) * 0x94d049bb133111ebULL;
            word = w ^ (w >> 31);
        }
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() noexcept { return double(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1): offset the 53-bit lattice by half a step.
    double uniform_open() noexcept { return (double(next() >> 11) + 0.5) * 0x1.0p-53; }

    // Unbiased integer in [0, n) by Lemire's multiply-shift method; no modulo
    // bias, rejection only with probability < n / 2^64.
    std::uint64_t below(std::uint64_t n) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double exponential() noexcept { return -std::log(uniform_open()); }

    // Standard normal via Marsaglia's polar method.
    double normal() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream seed for the i-th trajectory of an ensemble.
inline std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix64(master_seed ^ index);
}

} // namespace merws

#endif
