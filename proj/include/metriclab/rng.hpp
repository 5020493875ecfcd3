#pragma once

#include <cstdint>
#include <random>

namespace metriclab {

/// Deterministic uniform generator. All randomness in the library flows
/// through this wrapper so that runs are reproducible bit-for-bit from the
/// seed alone; the double extraction is pinned here instead of relying on
/// std::uniform_real_distribution, whose output is implementation-defined.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    std::uint64_t bits() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

} // namespace metriclab
