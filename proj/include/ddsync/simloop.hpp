#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ddsync/datamod.hpp"
#include "ddsync/leaderspec.hpp"
#include "ddsync/matcore.hpp"
#include "ddsync/synthesis.hpp"

namespace ddsync {

/// Full record of one closed-loop run. Inputs are defined on the whole
/// grid: u_i(horizon) is evaluated from the final states so outputs exist
/// at every step.
struct SimTrace {
    std::size_t horizon = 0;
    Matrix leader_states;                  // r x (horizon+1)
    Matrix leader_outputs;                 // p x (horizon+1)
    std::vector<Matrix> controller_states; // per follower, r x (horizon+1)
    std::vector<Matrix> follower_states;   // per follower, n_i x (horizon+1)
    std::vector<Matrix> inputs;            // per follower, m_i x (horizon+1)
    std::vector<Matrix> outputs;           // per follower, p x (horizon+1)
};

/// Synchronous closed-loop simulation of the distributed protocol
///   v_i(k+1) = S v_i + (1+d_i+g_i)^{-1} F (sum_j a_ij (v_j - v_i) + g_i (x_r - v_i))
///   u_i(k)   = K_i (x_i - Pi_i v_i) + Gamma_i v_i
/// against the given true plants. All controller updates read step-k
/// neighbor values (Jacobi sweep), which makes the trace independent of
/// agent ordering. Throws std::runtime_error naming the step on numeric
/// divergence.
SimTrace run_closed_loop(const ProtocolGains& protocol,
                         const std::vector<TrueSystem>& models,
                         const std::vector<Matrix>& x0s, const std::vector<Matrix>& v0s,
                         const LeaderSpec& leader, std::size_t horizon,
                         const std::vector<Matrix>* disturbances = nullptr);

/// Tail sup-norms of the three synchronization error signals.
struct ErrorReport {
    std::vector<double> e_y;  // sup |y_i - y_r| over the tail window
    std::vector<double> e_v;  // sup |v_i - x_r|
    std::vector<double> e_x;  // sup |x_i - Pi_i v_i|
    std::size_t tail_start = 0;
};

ErrorReport error_report(const SimTrace& trace, const ProtocolGains& protocol,
                         double tail_fraction);

/// True iff every tail error is at most tol. Meaningful for w = 0 runs;
/// persistent disturbances preclude the limits by construction.
bool verdict(const ErrorReport& report, double tol);

}  // namespace ddsync
