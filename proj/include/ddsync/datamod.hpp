#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ddsync/matcore.hpp"

namespace ddsync {

/// One follower's recorded experiment: inputs, measured disturbances and
/// the state trajectory. q may be zero for the disturbance-free case; the
/// disturbance block then simply drops out of every computation.
struct TrajectoryData {
    Matrix u_minus;  // m x tau
    Matrix w_minus;  // q x tau, q >= 0
    Matrix x_full;   // n x (tau + 1)

    std::size_t tau() const { return u_minus.cols(); }
    std::size_t state_dim() const { return x_full.rows(); }
    std::size_t input_dim() const { return u_minus.rows(); }
    std::size_t disturbance_dim() const { return w_minus.rows(); }
};

void validate_data(const TrajectoryData& data);

struct StatePartition {
    Matrix x_minus;  // n x tau
    Matrix x_plus;   // n x tau
};

/// Splits the state record into the shifted pair X-, X+.
StatePartition partition(const TrajectoryData& data);

/// A plant with known output map, used to generate data and to simulate.
struct TrueSystem {
    Matrix a;  // n x n
    Matrix b;  // n x m
    Matrix e;  // n x q (q may be 0)
    Matrix c;  // p x n
    Matrix d;  // p x m
};

void validate_system(const TrueSystem& sys);

/// Rolls the recursion x(k+1) = A x(k) + B u(k) + E w(k) forward; the
/// returned data satisfy X+ = [A B E] [X-; U-; W-] exactly.
TrajectoryData generate_data(const TrueSystem& sys, const Matrix& x0, const Matrix& u,
                             const Matrix& w);

/// One member of the consistency set.
struct SystemTriple {
    Matrix a, b, e;
};

/// [X-; U-; W-], the stacked data matrix all consistency statements refer to.
Matrix stacked_data(const TrajectoryData& data);

/// When the stacked data matrix has full row rank the consistency set is a
/// singleton; returns that unique (A, B, E), otherwise nothing.
std::optional<SystemTriple> identify_unique(const TrajectoryData& data);

/// Frobenius norm of X+ - [A B E] [X-; U-; W-]; zero exactly when the
/// triple explains the data.
double consistency_residual(const TrajectoryData& data, const SystemTriple& sys);

/// Draws members of the consistency set by perturbing a particular
/// solution along the left-annihilator of the stacked data matrix, with
/// perturbation Frobenius norm at most `scale`. Deterministic in `seed`.
std::vector<SystemTriple> sample_consistent_systems(const TrajectoryData& data,
                                                    std::size_t count, double scale,
                                                    std::uint64_t seed);

}  // namespace ddsync
