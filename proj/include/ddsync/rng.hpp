#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ddsync {

/// Seeded random stream with hand-rolled distributions on top of
/// mt19937_64. std::normal_distribution and friends are not pinned by the
/// standard, so rolling the transforms keeps sampled values identical
/// across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace ddsync
