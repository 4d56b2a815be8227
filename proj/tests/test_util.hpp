#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>

#include "ddsync/matcore.hpp"

namespace testutil {

// Deterministic generator independent of the library's RNG so that test
// randomness is reproducible across platforms and compilers.
class Rand {
public:
    explicit Rand(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        // xorshift64*
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545f4914f6cdd1dull;
    }

    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

inline ddsync::Matrix random_matrix(Rand& rng, std::size_t rows, std::size_t cols,
                                    double lo = -1.0, double hi = 1.0) {
    ddsync::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

inline double max_abs_diff(const ddsync::Matrix& a, const ddsync::Matrix& b) {
    return (a - b).max_abs();
}

// Independent oracle for 2x2 spectra: roots of the characteristic
// polynomial via the quadratic formula.
inline std::pair<std::complex<double>, std::complex<double>> eig2x2_oracle(
    const ddsync::Matrix& a) {
    const double tr = a(0, 0) + a(1, 1);
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {{(tr + s) / 2.0, 0.0}, {(tr - s) / 2.0, 0.0}};
    }
    const double s = std::sqrt(-disc);
    return {{tr / 2.0, s / 2.0}, {tr / 2.0, -s / 2.0}};
}

}  // namespace testutil
