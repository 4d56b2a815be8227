#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ddsync/informativity.hpp"
#include "ddsync/leaderspec.hpp"
#include "ddsync/matcore.hpp"
#include "ddsync/netgraph.hpp"
#include "ddsync/scenario.hpp"

namespace ddsync {

/// Everything one follower deploys, plus the certificates that justify it.
struct FollowerGains {
    Matrix k_gain;  // m x n
    Matrix pi;      // n x r
    Matrix gamma;   // m x r
    Matrix theta;   // tau x n, the stabilization certificate
    Matrix m_sol;   // tau x r, the regulation certificate
    double rho = 0.0;
    double residual_dynamics = 0.0;
    double residual_disturbance = 0.0;
    double residual_output = 0.0;
};

/// The assembled distributed protocol: the shared gain F that
/// simultaneously stabilizes S - lambda_i F over the coupling spectrum,
/// and the per-follower certified gains.
struct ProtocolGains {
    Matrix f;  // r x r
    std::vector<Complex> coupling_eigs;
    std::vector<FollowerGains> followers;
    CommGraph graph;
    LeaderSpec leader;
};

/// Stabilizing state feedback for a known pair via the standard Riccati
/// fixed point P = A'PA - A'PB (B'PB + I)^{-1} B'PA + I and
/// K = -(B'PB + I)^{-1} B'PA. Returns nothing when the iteration diverges
/// or stalls (unstabilizable pair).
std::optional<Matrix> design_state_feedback(const Matrix& a, const Matrix& b);

/// Shared-gain design: F0 = (P + I)^{-1} P S from the Riccati fixed point
/// with unit weights, then a scalar sweep over the grid
/// {1.0, 0.9, ..., 0.1, 1.1, ..., 2.0}. Every candidate c F0 is verified
/// directly per eigenvalue through the real embedding of S - lambda F;
/// among the candidates that stabilize all of them, the one with the
/// smallest worst-case spectral radius is returned (best margin). Nothing
/// is returned when no grid point works.
std::optional<Matrix> design_f(const LeaderSpec& leader,
                               const std::vector<Complex>& lambdas,
                               double stability_margin = 1e-9);

struct SynthesisDiagnostic {
    std::string code;    // failing condition, e.g. "stabilization: X- rank"
    std::string detail;  // explanation
    int follower = -1;   // 0-based index, -1 when not follower-specific
};

using SynthesisResult = std::variant<ProtocolGains, SynthesisDiagnostic>;

struct SynthesisOptions {
    double tol_informativity = 1e-8;
    double stability_margin = 1e-9;
    std::optional<Matrix> f_override;  // bypasses design, never verification
};

/// Full pipeline: leader assumptions, graph assumption, per-follower
/// stabilization and regulation certificates, then the shared gain F.
/// Never partially succeeds; the first failing condition is reported.
SynthesisResult synthesize(const Scenario& scenario, const SynthesisOptions& options = {});

}  // namespace ddsync
