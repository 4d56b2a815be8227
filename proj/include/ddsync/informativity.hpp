#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ddsync/datamod.hpp"
#include "ddsync/leaderspec.hpp"
#include "ddsync/matcore.hpp"

namespace ddsync {

/// A constrained right inverse of X- certifying that one feedback gain
/// stabilizes every system consistent with the data: X- Theta = I,
/// W- Theta = 0 and X+ Theta Schur-stable, so A + B K = X+ Theta for all
/// consistent (A, B, E) with K = U- Theta.
struct StabilizationCertificate {
    Matrix theta;        // tau x n
    Matrix k_gain;       // m x n, equals U- Theta
    Matrix closed_loop;  // n x n, equals X+ Theta
    double rho = 0.0;    // spectral radius of closed_loop
};

/// Solution M of the data-based regulator equations together with the
/// gains it induces: Pi = X- M, Gamma = U- M.
struct RegulationCertificate {
    Matrix m_sol;   // tau x r
    Matrix pi;      // n x r
    Matrix gamma;   // m x r
    double residual_dynamics = 0.0;     // |X+ M - X- M S|_F
    double residual_disturbance = 0.0;  // |W- M|_F (0 rows when q = 0)
    double residual_output = 0.0;       // |C X- M + D U- M - R|_F
};

struct NotInformative {
    std::string code;    // short machine-readable tag, e.g. "rank"
    std::string detail;  // human-readable explanation
};

using StabilizationResult = std::variant<StabilizationCertificate, NotInformative>;
using RegulationResult = std::variant<RegulationCertificate, NotInformative>;

/// Decides informativity for stabilization by state feedback. When the
/// stacked data matrix has full row rank the consistency set is a
/// singleton and the gain comes from a Riccati design on the identified
/// system; otherwise a feasibility search over constrained right inverses
/// runs. Failure of the search is reported as inconclusive, never as a
/// disproof.
StabilizationResult check_stabilization(const TrajectoryData& data, double tol = 1e-8,
                                        double stability_margin = 1e-9);

/// True iff the constraint system {X- Theta = I, W- Theta = 0,
/// U- Theta = k} is solvable within tol and the induced X+ Theta is
/// Schur-stable; this certifies that k stabilizes every consistent system.
bool verify_k(const TrajectoryData& data, const Matrix& k, double tol = 1e-8,
              double stability_margin = 1e-9);

/// Feasibility search for a right inverse Theta with P = X- Theta
/// symmetric positive definite, W- Theta = 0 and
/// [[P, X+ Theta], [(X+ Theta)^T, P]] positive definite, by alternating
/// projections between the linear image set and the shifted PSD cone.
/// On success returns the normalized right inverse Theta P^{-1}.
std::optional<Matrix> sdp_feasibility(const TrajectoryData& data,
                                      std::size_t max_iter = 5000, double tol = 1e-8);

/// Decides informativity for output regulation by solving the stacked
/// vectorized equations {X+ M - X- M S = 0, W- M = 0,
/// (C X- + D U-) M = R} for the minimum-norm M. The W block is absent for
/// disturbance-free data (q = 0).
RegulationResult check_regulation(const TrajectoryData& data, const Matrix& c,
                                  const Matrix& d, const LeaderSpec& leader,
                                  double tol = 1e-8);

/// Checks Pi, Gamma against the model-based regulator equations
/// A Pi + B Gamma = Pi S and C Pi + D Gamma = R for every given system.
bool verify_regulation_on_models(const RegulationCertificate& cert,
                                 const std::vector<SystemTriple>& systems,
                                 const Matrix& c, const Matrix& d,
                                 const LeaderSpec& leader, double tol);

}  // namespace ddsync
