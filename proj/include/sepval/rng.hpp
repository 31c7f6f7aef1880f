#pragma once

#include <cstdint>

namespace sepval {

/// Counter-based 64-bit generator (splitmix64). The output stream depends
/// only on the seed and the call count, with no platform-dependent state,
/// so "uniform(0,1)" draws are reproducible across languages and builds.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in the open interval (0,1): 53 mantissa bits, offset by
    /// half an ulp so neither endpoint is reachable.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform draw in [-a, a].
    double next_symmetric(double a) { return (2.0 * next_unit() - 1.0) * a; }

private:
    std::uint64_t state_;
};

} // namespace sepval
