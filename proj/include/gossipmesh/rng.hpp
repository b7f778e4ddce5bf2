#pragma once

#include <cstdint>
#include <random>

namespace gossipmesh {

// SplitMix64 scrambling step. Used to derive well-mixed sub-seeds from a
// master seed and for cheap stateless uniform picks.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic RNG. The mt19937_64 core is standardized, but the std
// distributions are implementation-defined, so the uniform draws below are
// hand-rolled to keep seed -> output stable across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    bool bernoulli(double p) { return next_double() < p; }

    // Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t next_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace gossipmesh
