#include "ddsync/leaderspec.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddsync {

void validate_leader(const LeaderSpec& leader) {
    if (leader.s.rows() != leader.s.cols())
        throw std::invalid_argument("leader: S must be square");
    if (leader.r_out.cols() != leader.s.rows())
        throw std::invalid_argument("leader: R column count must match dim(S)");
    if (leader.x0.rows() != leader.s.rows() || leader.x0.cols() != 1)
        throw std::invalid_argument("leader: x0 must be a column vector of dim(S)");
    if (!leader.s.all_finite() || !leader.r_out.all_finite() || !leader.x0.all_finite())
        throw std::invalid_argument("leader: non-finite entries");
}

LeaderAssumptionReport check_assumption_s(const LeaderSpec& leader, double tol) {
    LeaderAssumptionReport report;
    report.eigenvalues = eigenvalues(leader.s);

    report.max_modulus_error = 0.0;
    for (const Complex& lam : report.eigenvalues)
        report.max_modulus_error =
            std::max(report.max_modulus_error, std::abs(std::abs(lam) - 1.0));
    report.unit_circle = report.max_modulus_error <= tol;

    report.min_gap = std::numeric_limits<double>::infinity();
    const std::size_t r = report.eigenvalues.size();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            report.min_gap = std::min(
                report.min_gap, std::abs(report.eigenvalues[i] - report.eigenvalues[j]));
    report.simple = r < 2 || report.min_gap > tol;

    report.holds = report.unit_circle && report.simple;
    return report;
}

bool check_observability(const LeaderSpec& leader) {
    const std::size_t r = leader.state_dim();
    if (r == 0) return true;
    std::vector<Matrix> blocks;
    Matrix row = leader.r_out;
    for (std::size_t k = 0; k < r; ++k) {
        blocks.push_back(row);
        row = row * leader.s;
    }
    const std::vector<double> sv = singular_values(vstack(blocks));
    if (sv.empty() || sv.front() == 0.0) return false;
    std::size_t rank = 0;
    for (double s : sv)
        if (s > 1e-10 * sv.front()) ++rank;
    return rank == r;
}

LeaderTrajectory leader_trajectory(const LeaderSpec& leader, std::size_t horizon) {
    validate_leader(leader);
    const std::size_t r = leader.state_dim(), p = leader.output_dim();
    LeaderTrajectory traj{Matrix(r, horizon + 1), Matrix(p, horizon + 1)};
    Matrix x = leader.x0;
    for (std::size_t k = 0; k <= horizon; ++k) {
        traj.states.set_column(k, x);
        traj.outputs.set_column(k, leader.r_out * x);
        if (k < horizon) x = leader.s * x;
    }
    return traj;
}

}  // namespace ddsync
