#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

namespace geosynth {

inline constexpr std::uint64_t kFnvOffset64 = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime64 = 0x100000001b3ULL;

inline constexpr std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = kFnvOffset64) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime64;
    }
    return h;
}

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// xoshiro256++ stream. State is expanded from a 64-bit seed with splitmix64,
// so the sequence is a pure function of the seed, independent of platform
// and standard-library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : state_) {
            x = splitmix64(x);
            w = x;
        }
        // all-zero state is invalid for xoshiro
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0)
            state_[0] = 0x9e3779b97f4a7c15ULL;
    }

    std::uint64_t next_u64() {
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

    /// Uniform in [0,1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Inclusive integer range. Range widths here are tiny relative to 2^64,
    /// so plain modulo reduction is used.
    std::int64_t randint(std::int64_t a, std::int64_t b) {
        if (a >= b)
            return a;
        const std::uint64_t span = static_cast<std::uint64_t>(b - a) + 1;
        return a + static_cast<std::int64_t>(next_u64() % span);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Box-Muller. Always consumes exactly two uniforms so draw counts stay
    /// constant regardless of the outcome.
    double normal(double mu = 0.0, double sigma = 1.0) {
        double u1 = uniform01();
        const double u2 = uniform01();
        if (u1 <= 0.0)
            u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mu + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Clipped rather than rejected: one draw per call, no resampling loop.
    double normal_clipped(double mu, double sigma, double lo, double hi) {
        const double v = normal(mu, sigma);
        return v < lo ? lo : (v > hi ? hi : v);
    }

    /// Weighted categorical draw; weights need not be normalized.
    std::size_t categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights)
            total += w;
        double u = uniform01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0)
                return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

// Root of a deterministic stream tree. stream("label") yields an independent
// generator; derive("label") yields a nested root. Identical (seed, label)
// paths produce identical sequences everywhere.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t stream_seed(std::string_view label) const {
        return splitmix64(seed_ ^ fnv1a64(label));
    }

    Rng stream(std::string_view label) const { return Rng(stream_seed(label)); }

    SeededRng derive(std::string_view label) const { return SeededRng(stream_seed(label)); }

    SeededRng derive(std::string_view label, std::uint64_t index) const {
        return SeededRng(splitmix64(stream_seed(label) ^ splitmix64(index)));
    }

private:
    std::uint64_t seed_;
};

} // namespace geosynth
