#pragma once

#include <cstdint>

namespace ranklab {

// SplitMix64: the state advances by a fixed increment and every output is a
// finalizer hash of the state, so it behaves as a counter-based generator.
// Independent streams are derived by hashing (seed, tag) pairs, which keeps
// experiment cells decoupled: adding a cell never shifts another cell's
// draws. Determinism is guaranteed within a build, not across compilers.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (cosine branch only, two draws each).
    double gaussian();

    int uniform_int(int lo, int hi);  // inclusive bounds

    // Derived stream keyed by this stream's current state and a tag.
    SplitMix64 fork(std::uint64_t tag) const;
};

std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

}  // namespace ranklab
