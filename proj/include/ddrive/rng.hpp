#pragma once

#include <cstdint>
#include <random>

namespace ddrive {

// Deterministic random source for all stochastic components.
//
// The engine is std::mt19937_64, whose output sequence is pinned by the
// standard, and uniform doubles are produced by 53-bit mantissa extraction
// rather than std::uniform_real_distribution (whose output is
// implementation-defined). A stream seeded with the same value therefore
// produces the same sequence on every platform and compiler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1).
    double u01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * u01();
    }

    // Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
    int uniform_int(int lo, int hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return lo + static_cast<int>(r % range);
    }

private:
    std::mt19937_64 engine_;
};

// Derives an independent child seed from (seed, stream index) with the
// SplitMix64 finalizer. Components that need their own stream (one per
// particle, one per Monte Carlo run, workspace vs planner draws within a
// run) take split_seed(base, k) for distinct k, so adding or reordering
// consumers never shifts another stream's draws.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace ddrive
