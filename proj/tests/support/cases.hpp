#pragma once

// Seeded generator for property tests. Each test owns its seed so a failure
// reproduces from the reported case index alone.

#include <cstdint>
#include <random>

namespace wormhole::props {

class Cases {
public:
    explicit Cases(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    /// Nonzero coupling with random sign and magnitude in [lo, hi].
    double signed_magnitude(double lo, double hi)
    {
        const double m = uniform(lo, hi);
        return integer(0, 1) ? m : -m;
    }

private:
    std::mt19937_64 rng_;
};

} // namespace wormhole::props
