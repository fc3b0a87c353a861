#pragma once

// SplitMix64: counter-based, splittable, 64-bit seed. Streams depend only on
// the seed, which keeps every randomized experiment bit-reproducible.

#include <cstdint>

namespace sperturb {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1) with 53 random bits
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // independent stream for a subtask
    SplitMix64 split() { return SplitMix64(next()); }
};

}  // namespace sperturb
