#include "ddsync/simloop.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ddsync {

SimTrace run_closed_loop(const ProtocolGains& protocol,
                         const std::vector<TrueSystem>& models,
                         const std::vector<Matrix>& x0s, const std::vector<Matrix>& v0s,
                         const LeaderSpec& leader, std::size_t horizon,
                         const std::vector<Matrix>* disturbances) {
    validate_leader(leader);
    const std::size_t count = protocol.followers.size();
    if (models.size() != count || x0s.size() != count || v0s.size() != count)
        throw std::invalid_argument("run_closed_loop: follower count mismatch");
    if (protocol.graph.n() != count)
        throw std::invalid_argument("run_closed_loop: graph size mismatch");
    if (disturbances && disturbances->size() != count)
        throw std::invalid_argument("run_closed_loop: disturbance count mismatch");
    const std::size_t r = leader.state_dim(), p = leader.output_dim();

    for (std::size_t i = 0; i < count; ++i) {
        validate_system(models[i]);
        const FollowerGains& gains = protocol.followers[i];
        const std::size_t n = models[i].a.rows(), m = models[i].b.cols();
        if (gains.k_gain.rows() != m || gains.k_gain.cols() != n ||
            gains.pi.rows() != n || gains.pi.cols() != r || gains.gamma.rows() != m ||
            gains.gamma.cols() != r)
            throw std::invalid_argument("run_closed_loop: gain shape mismatch");
        if (models[i].c.rows() != p)
            throw std::invalid_argument("run_closed_loop: output dimension mismatch");
        if (x0s[i].rows() != n || x0s[i].cols() != 1 || v0s[i].rows() != r ||
            v0s[i].cols() != 1)
            throw std::invalid_argument("run_closed_loop: initial state shape mismatch");
        if (disturbances) {
            const Matrix& w = (*disturbances)[i];
            if (w.rows() != models[i].e.cols() ||
                (w.rows() > 0 && w.cols() < horizon))
                throw std::invalid_argument(
                    "run_closed_loop: disturbance sequence shape mismatch");
        }
    }

    SimTrace trace;
    trace.horizon = horizon;
    trace.leader_states = Matrix(r, horizon + 1);
    trace.leader_outputs = Matrix(p, horizon + 1);
    trace.controller_states.reserve(count);
    trace.follower_states.reserve(count);
    trace.inputs.reserve(count);
    trace.outputs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        trace.controller_states.emplace_back(r, horizon + 1);
        trace.follower_states.emplace_back(models[i].a.rows(), horizon + 1);
        trace.inputs.emplace_back(models[i].b.cols(), horizon + 1);
        trace.outputs.emplace_back(p, horizon + 1);
    }

    Matrix xr = leader.x0;
    std::vector<Matrix> x = x0s;
    std::vector<Matrix> v = v0s;

    const CommGraph& graph = protocol.graph;
    std::vector<double> degree(count, 0.0);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j) degree[i] += graph.weights(i, j);

    for (std::size_t k = 0; k <= horizon; ++k) {
        trace.leader_states.set_column(k, xr);
        trace.leader_outputs.set_column(k, leader.r_out * xr);

        std::vector<Matrix> u(count);
        for (std::size_t i = 0; i < count; ++i) {
            const FollowerGains& gains = protocol.followers[i];
            u[i] = gains.k_gain * (x[i] - gains.pi * v[i]) + gains.gamma * v[i];
            trace.controller_states[i].set_column(k, v[i]);
            trace.follower_states[i].set_column(k, x[i]);
            trace.inputs[i].set_column(k, u[i]);
            trace.outputs[i].set_column(k, models[i].c * x[i] + models[i].d * u[i]);
            if (!x[i].all_finite() || !v[i].all_finite()) {
                std::ostringstream msg;
                msg << "run_closed_loop: non-finite state at step " << k << " (follower "
                    << i + 1 << ")";
                throw std::runtime_error(msg.str());
            }
        }
        if (k == horizon) break;

        // Jacobi sweep: all controller updates read step-k values.
        std::vector<Matrix> v_next(count);
        for (std::size_t i = 0; i < count; ++i) {
            Matrix coupling = graph.leader_gains[i] * (xr - v[i]);
            for (std::size_t j = 0; j < count; ++j) {
                const double a_ij = graph.weights(i, j);
                if (a_ij > 0.0) coupling += a_ij * (v[j] - v[i]);
            }
            const double scale = 1.0 / (1.0 + degree[i] + graph.leader_gains[i]);
            v_next[i] = protocol.leader.s * v[i] + scale * (protocol.f * coupling);
        }
        for (std::size_t i = 0; i < count; ++i) {
            Matrix x_next = models[i].a * x[i] + models[i].b * u[i];
            if (disturbances && (*disturbances)[i].rows() > 0)
                x_next += models[i].e * (*disturbances)[i].column(k);
            x[i] = std::move(x_next);
        }
        v = std::move(v_next);
        xr = leader.s * xr;
    }
    return trace;
}

ErrorReport error_report(const SimTrace& trace, const ProtocolGains& protocol,
                         double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw std::invalid_argument("error_report: tail_fraction must be in (0, 1]");
    const std::size_t count = trace.outputs.size();
    ErrorReport report;
    report.tail_start = static_cast<std::size_t>(
        std::ceil((1.0 - tail_fraction) * static_cast<double>(trace.horizon)));
    report.e_y.assign(count, 0.0);
    report.e_v.assign(count, 0.0);
    report.e_x.assign(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const Matrix& pi = protocol.followers[i].pi;
        for (std::size_t k = report.tail_start; k <= trace.horizon; ++k) {
            report.e_y[i] = std::max(
                report.e_y[i],
                (trace.outputs[i].column(k) - trace.leader_outputs.column(k)).max_abs());
            report.e_v[i] = std::max(
                report.e_v[i], (trace.controller_states[i].column(k) -
                                trace.leader_states.column(k))
                                   .max_abs());
            report.e_x[i] =
                std::max(report.e_x[i],
                         (trace.follower_states[i].column(k) -
                          pi * trace.controller_states[i].column(k))
                             .max_abs());
        }
    }
    return report;
}

bool verdict(const ErrorReport& report, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("verdict: tol must be positive");
    for (double e : report.e_y)
        if (e > tol) return false;
    for (double e : report.e_v)
        if (e > tol) return false;
    for (double e : report.e_x)
        if (e > tol) return false;
    return true;
}

}  // namespace ddsync
