#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mtswarm {

/// Seeded 64-bit Mersenne Twister with draws defined bit-for-bit here rather
/// than by the standard library's distributions, which vary across vendors.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) { return p > 0.0 && uniform() < p; }
    /// Uniform in [0, n); n must be positive.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

private:
    std::mt19937_64 engine_;
};

}  // namespace mtswarm
