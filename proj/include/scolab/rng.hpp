// rng.hpp
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace scolab {

// SplitMix64 finalizer. Used to turn structured seed tuples into well-mixed
// 64-bit seeds.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

// trial_seed = mix(master, experiment id, m, trial). Each component is folded
// through splitmix so that neighbouring tuples land far apart.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view experiment_id, std::uint64_t m,
                                 std::uint64_t trial) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ fnv1a64(experiment_id));
    h = splitmix64(h ^ (m * 0xD1B54A32D192ED03ULL));
    h = splitmix64(h ^ (trial * 0x8CB92BA72F3D8DD7ULL));
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t salt) {
    return splitmix64(splitmix64(parent) ^ (salt + 0x632BE59BD9B4E019ULL));
}

// Random stream with platform-independent output. The engine is
// std::mt19937_64 (fully specified by the standard); the distributions are
// implemented here because the std:: ones are implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Rejection sampling, unbiased.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // P[true] = p, compared against a 53-bit dyadic uniform.
    bool bernoulli(double p) { return uniform01() < p; }

    int random_sign() { return (engine_() >> 63) ? 1 : -1; }

    // Standard normal, Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
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
        has_spare_ = true;
        return u * f;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace scolab
