#include "ddsync/cli.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <variant>

#include "ddsync/informativity.hpp"
#include "ddsync/rng.hpp"
#include "ddsync/scenario_io.hpp"
#include "ddsync/simloop.hpp"
#include "ddsync/synthesis.hpp"

namespace ddsync {

namespace {

SynthesisOptions to_synthesis_options(const CliOptions& options) {
    SynthesisOptions s;
    s.tol_informativity = options.tol_informativity;
    s.stability_margin = options.tol_stability;
    if (options.f_matrix_path)
        s.f_override = read_matrix_csv(*options.f_matrix_path);
    return s;
}

// Assumption checks and per-follower certificates; returns the synthesis
// outcome so callers can reuse it.
SynthesisResult check_and_report(const Scenario& scenario, const CliOptions& options,
                                 std::ostream& out) {
    const LeaderAssumptionReport leader_report = check_assumption_s(scenario.leader);
    out << "leader: eigenvalue assumption "
        << (leader_report.holds ? "holds" : "VIOLATED") << " (max modulus error "
        << leader_report.max_modulus_error << ")\n";
    out << "leader: observability "
        << (check_observability(scenario.leader) ? "holds" : "VIOLATED") << "\n";
    const GraphAssumptionReport graph_report = check_assumption_graph(scenario.graph);
    out << "graph: connectivity assumption "
        << (graph_report.holds ? "holds" : "VIOLATED") << " (" << graph_report.roots.size()
        << " root node(s))\n";

    SynthesisResult result = synthesize(scenario, to_synthesis_options(options));
    if (const auto* protocol = std::get_if<ProtocolGains>(&result)) {
        for (std::size_t i = 0; i < protocol->followers.size(); ++i) {
            const FollowerGains& g = protocol->followers[i];
            out << "follower " << i + 1
                << ": informative for stabilization (closed-loop radius " << std::setprecision(4)
                << g.rho << ") and for output regulation (residual "
                << std::scientific << std::setprecision(2)
                << std::sqrt(g.residual_dynamics * g.residual_dynamics +
                             g.residual_disturbance * g.residual_disturbance +
                             g.residual_output * g.residual_output)
                << ")\n"
                << std::defaultfloat << std::setprecision(6);
        }
        out << protocol->followers.size() << "/" << protocol->followers.size()
            << " followers informative\n";
    } else {
        const auto& diag = std::get<SynthesisDiagnostic>(result);
        out << "NOT informative: " << diag.code;
        if (diag.follower >= 0) out << " (follower " << diag.follower + 1 << ")";
        out << "\n  " << diag.detail << "\n";
    }
    return result;
}

int guard(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace

int run_check(const std::string& scenario_path, const CliOptions& options,
              std::ostream& out, std::ostream& err) {
    return guard(err, [&]() {
        const Scenario scenario = load_scenario(scenario_path);
        const SynthesisResult result = check_and_report(scenario, options, out);
        return std::holds_alternative<ProtocolGains>(result) ? kExitSuccess
                                                             : kExitNegative;
    });
}

int run_synthesize(const std::string& scenario_path, const std::string& out_path,
                   const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guard(err, [&]() {
        const Scenario scenario = load_scenario(scenario_path);
        SynthesisResult result = synthesize(scenario, to_synthesis_options(options));
        if (const auto* diag = std::get_if<SynthesisDiagnostic>(&result)) {
            out << "synthesis failed: " << diag->code;
            if (diag->follower >= 0) out << " (follower " << diag->follower + 1 << ")";
            out << "\n  " << diag->detail << "\n";
            return kExitNegative;
        }
        const auto& protocol = std::get<ProtocolGains>(result);
        save_protocol(protocol, out_path);
        out << "protocol written to " << out_path << " (" << protocol.followers.size()
            << " followers, " << protocol.coupling_eigs.size()
            << " coupling eigenvalues)\n";
        return kExitSuccess;
    });
}

int run_simulate(const std::string& scenario_path, const std::string& protocol_path,
                 std::size_t horizon, const std::string& trace_path,
                 const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guard(err, [&]() {
        const Scenario scenario = load_scenario(scenario_path);
        const ProtocolGains protocol = load_protocol(protocol_path);
        if (protocol.followers.size() != scenario.followers.size())
            throw std::invalid_argument(
                "protocol and scenario disagree on the follower count");

        std::vector<TrueSystem> models;
        for (std::size_t i = 0; i < scenario.followers.size(); ++i) {
            if (!scenario.followers[i].true_model)
                throw std::invalid_argument(
                    "simulation requires plant models: follower " + std::to_string(i + 1) +
                    " has no true_model in the scenario file");
            models.push_back(*scenario.followers[i].true_model);
        }

        Rng rng(options.seed);
        std::vector<Matrix> x0s, v0s;
        for (const TrueSystem& model : models) {
            Matrix x0(model.a.rows(), 1);
            for (std::size_t j = 0; j < x0.rows(); ++j) x0(j, 0) = rng.uniform(-1.0, 1.0);
            x0s.push_back(std::move(x0));
        }
        for (std::size_t i = 0; i < models.size(); ++i) {
            Matrix v0(protocol.leader.state_dim(), 1);
            for (std::size_t j = 0; j < v0.rows(); ++j) v0(j, 0) = rng.uniform(-1.0, 1.0);
            v0s.push_back(std::move(v0));
        }

        const SimTrace trace =
            run_closed_loop(protocol, models, x0s, v0s, scenario.leader, horizon);
        if (!trace_path.empty()) {
            write_trace_csv(trace, trace_path);
            out << "trace written to " << trace_path << "\n";
        }

        const ErrorReport report = error_report(trace, protocol, options.tail_fraction);
        out << "tail window starts at step " << report.tail_start << "\n";
        out << std::scientific << std::setprecision(3);
        for (std::size_t i = 0; i < report.e_y.size(); ++i)
            out << "follower " << i + 1 << ": e_y " << report.e_y[i] << "  e_v "
                << report.e_v[i] << "  e_x " << report.e_x[i] << "\n";
        out << std::defaultfloat;
        const bool ok = verdict(report, options.tol_verdict);
        out << "verdict: " << (ok ? "synchronized" : "NOT synchronized")
            << " (tolerance " << options.tol_verdict << ")\n";
        return ok ? kExitSuccess : kExitNegative;
    });
}

int run_demo(const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guard(err, [&]() {
        const Scenario scenario = demo_scenario();
        out << "=== embedded demo: informativity check ===\n";
        SynthesisResult result = check_and_report(scenario, options, out);
        if (!std::holds_alternative<ProtocolGains>(result)) return kExitNegative;
        const auto& protocol = std::get<ProtocolGains>(result);

        out << "=== synthesized protocol ===\n";
        out << std::setprecision(6);
        out << "F =\n";
        for (std::size_t i = 0; i < protocol.f.rows(); ++i) {
            out << "  ";
            for (std::size_t j = 0; j < protocol.f.cols(); ++j)
                out << protocol.f(i, j) << (j + 1 < protocol.f.cols() ? " " : "");
            out << "\n";
        }
        for (std::size_t i = 0; i < protocol.followers.size(); ++i) {
            const FollowerGains& g = protocol.followers[i];
            out << "follower " << i + 1 << ": K = [";
            for (std::size_t j = 0; j < g.k_gain.cols(); ++j)
                out << g.k_gain(0, j) << (j + 1 < g.k_gain.cols() ? ", " : "");
            out << "], closed-loop radius " << g.rho << "\n";
        }

        // Cross-check the reference solutions shipped with the demo: each
        // gain must verify on its data, each M must satisfy the regulation
        // equations the toolkit solves.
        out << "=== reference solution checks ===\n";
        const Matrix reference_k[3] = {Matrix{{-0.3677, -1.3560}},
                                       Matrix{{0.4183, -1.4385}},
                                       Matrix{{0.0017, 1.0008}}};
        const Matrix reference_m[3] = {Matrix{{0.0, 1.0}, {2.0, -1.0}, {-1.0, 0.0}},
                                       Matrix{{0.4, -1.4}, {0.4, 0.6}, {0.2, 0.8}},
                                       Matrix{{0.6, -0.1}, {-0.3, 0.3}, {0.7, -0.2}}};
        bool references_ok = true;
        for (std::size_t i = 0; i < scenario.followers.size(); ++i) {
            const FollowerSetup& f = scenario.followers[i];
            const Matrix& k = reference_k[i % 3];
            const Matrix& m = reference_m[i % 3];
            const bool k_ok = verify_k(f.data, k, options.tol_informativity);
            auto [xm, xp] = partition(f.data);
            const double m_residual = std::hypot(
                (xp * m - xm * m * scenario.leader.s).frobenius_norm(),
                (f.c * xm * m + f.d * f.data.u_minus * m - scenario.leader.r_out)
                    .frobenius_norm());
            const bool m_ok = m_residual <= options.tol_informativity;
            references_ok = references_ok && k_ok && m_ok;
            out << "follower " << i + 1 << ": reference K "
                << (k_ok ? "verified" : "REJECTED") << ", reference M residual "
                << std::scientific << std::setprecision(2) << m_residual
                << std::defaultfloat << std::setprecision(6) << "\n";
        }
        if (!references_ok) return kExitNegative;

        out << "=== closed-loop simulation (horizon 300, seed " << options.seed
            << ") ===\n";
        std::vector<TrueSystem> models;
        for (const FollowerSetup& f : scenario.followers) models.push_back(*f.true_model);
        Rng rng(options.seed);
        std::vector<Matrix> x0s, v0s;
        for (const TrueSystem& model : models) {
            Matrix x0(model.a.rows(), 1);
            for (std::size_t j = 0; j < x0.rows(); ++j) x0(j, 0) = rng.uniform(-1.0, 1.0);
            x0s.push_back(std::move(x0));
        }
        for (std::size_t i = 0; i < models.size(); ++i) {
            Matrix v0(protocol.leader.state_dim(), 1);
            for (std::size_t j = 0; j < v0.rows(); ++j) v0(j, 0) = rng.uniform(-1.0, 1.0);
            v0s.push_back(std::move(v0));
        }
        const SimTrace trace =
            run_closed_loop(protocol, models, x0s, v0s, scenario.leader, 300);
        const ErrorReport report = error_report(trace, protocol, options.tail_fraction);
        double worst = 0.0;
        for (std::size_t i = 0; i < report.e_y.size(); ++i)
            worst = std::max({worst, report.e_y[i], report.e_v[i], report.e_x[i]});
        out << "worst tail error " << std::scientific << std::setprecision(3) << worst
            << std::defaultfloat << "\n";
        const bool ok = verdict(report, options.tol_verdict);
        out << "verdict: " << (ok ? "synchronized" : "NOT synchronized") << "\n";
        return ok ? kExitSuccess : kExitNegative;
    });
}

}  // namespace ddsync
