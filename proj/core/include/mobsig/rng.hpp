#pragma once

#include <cmath>
#include <cstdint>

namespace mobsig {

/// Counter-based generator (splitmix64). Deterministic across platforms,
/// cheap to seed, and trivially splittable: `split()` derives an
/// independent stream, so parallel generation stays reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Box-Muller; draws two uniforms per normal, no caching so that the
    /// consumption pattern is easy to reason about in seeded experiments.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

    Rng split() { return Rng(next_u64() ^ 0xD1B54A32D192ED03ull); }

private:
    std::uint64_t state_;
};

}  // namespace mobsig
