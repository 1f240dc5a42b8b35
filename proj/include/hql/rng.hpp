#pragma once

#include <cstdint>

namespace hql {

/// Deterministic 64-bit generator (splitmix64). Chosen because the update
/// and output functions are tiny, well known, and easy to reproduce in any
/// language, so sample streams are defined by the seed alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1): top 53 bits of the stream, truncated.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Derive an independent stream (splitmix split convention).
    Rng split() { return Rng(next_u64()); }

private:
    std::uint64_t state_;
};

} // namespace hql
