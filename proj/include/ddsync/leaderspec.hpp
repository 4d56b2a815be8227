#pragma once

#include <cstddef>
#include <vector>

#include "ddsync/matcore.hpp"

namespace ddsync {

/// The known reference model: x_r(k+1) = S x_r(k), y_r(k) = R x_r(k).
struct LeaderSpec {
    Matrix s;      // r x r
    Matrix r_out;  // p x r
    Matrix x0;     // r x 1

    std::size_t state_dim() const { return s.rows(); }
    std::size_t output_dim() const { return r_out.rows(); }
};

void validate_leader(const LeaderSpec& leader);

struct LeaderAssumptionReport {
    std::vector<Complex> eigenvalues;
    double max_modulus_error = 0.0;  // max over eigenvalues of | |lambda| - 1 |
    double min_gap = 0.0;            // min pairwise eigenvalue distance
    bool unit_circle = false;
    bool simple = false;
    bool holds = false;
};

/// All eigenvalues of S must be simple and of unit modulus (within tol).
LeaderAssumptionReport check_assumption_s(const LeaderSpec& leader, double tol = 1e-9);

/// Rank test on the stacked observability matrix [R; RS; ...; RS^{r-1}],
/// rank decided from singular values at 1e-10 relative tolerance.
bool check_observability(const LeaderSpec& leader);

struct LeaderTrajectory {
    Matrix states;   // r x (horizon+1)
    Matrix outputs;  // p x (horizon+1)
};

LeaderTrajectory leader_trajectory(const LeaderSpec& leader, std::size_t horizon);

}  // namespace ddsync
