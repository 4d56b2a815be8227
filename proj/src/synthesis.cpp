#include "ddsync/synthesis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ddsync {

std::optional<Matrix> design_state_feedback(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("design_state_feedback: A must be square");
    if (b.rows() != a.rows())
        throw std::invalid_argument("design_state_feedback: B row count mismatch");
    const std::size_t n = a.rows(), m = b.cols();
    const Matrix q = Matrix::identity(n);
    const Matrix r = Matrix::identity(m);
    const Matrix at = a.transpose(), bt = b.transpose();

    Matrix p = q;
    constexpr std::size_t kMaxIter = 10000;
    constexpr double kTol = 1e-12;
    for (std::size_t it = 0; it < kMaxIter; ++it) {
        const Matrix pa = p * a, pb = p * b;
        Matrix next;
        try {
            next = at * pa - at * pb * solve_square(bt * pb + r, bt * pa) + q;
        } catch (const std::runtime_error&) {
            return std::nullopt;
        }
        next = 0.5 * (next + next.transpose());
        const double delta = (next - p).frobenius_norm();
        p = std::move(next);
        if (!p.all_finite() || p.frobenius_norm() > 1e12) return std::nullopt;
        if (delta <= kTol) {
            const Matrix pb2 = p * b;
            Matrix k = -1.0 * solve_square(bt * pb2 + r, bt * p * a);
            if (!is_schur(a + b * k, 1e-12)) return std::nullopt;
            return k;
        }
    }
    return std::nullopt;
}

namespace {

// Worst spectral radius of S - lambda F over the coupling spectrum,
// evaluated with real arithmetic through the 2r x 2r embedding.
double worst_radius(const Matrix& s, const Matrix& f,
                    const std::vector<Complex>& lambdas) {
    double worst = 0.0;
    for (const Complex& lambda : lambdas) {
        const Matrix embedded =
            complex_embed(s - lambda.real() * f, -lambda.imag() * f);
        worst = std::max(worst, spectral_radius(embedded));
    }
    return worst;
}

}  // namespace

std::optional<Matrix> design_f(const LeaderSpec& leader,
                               const std::vector<Complex>& lambdas,
                               double stability_margin) {
    validate_leader(leader);
    const std::size_t r = leader.state_dim();
    const Matrix identity = Matrix::identity(r);
    const Matrix p = dare_fixed_point(leader.s, identity);
    const Matrix f0 = solve_square(p + identity, p * leader.s);

    // Grid order matters only for ties; selection is by best margin.
    static constexpr double kGrid[] = {1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4,
                                       0.3, 0.2, 0.1, 1.1, 1.2, 1.3, 1.4,
                                       1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
    std::optional<Matrix> best;
    double best_radius = 1.0;
    for (double c : kGrid) {
        const Matrix candidate = c * f0;
        const double radius = worst_radius(leader.s, candidate, lambdas);
        if (radius < 1.0 - stability_margin && radius < best_radius) {
            best_radius = radius;
            best = candidate;
        }
    }
    return best;
}

SynthesisResult synthesize(const Scenario& scenario, const SynthesisOptions& options) {
    validate_scenario(scenario);

    const LeaderAssumptionReport leader_report = check_assumption_s(scenario.leader);
    if (!leader_report.holds) {
        std::ostringstream msg;
        msg << "eigenvalues of S must be simple and on the unit circle "
            << "(max modulus error " << leader_report.max_modulus_error
            << ", min gap " << leader_report.min_gap << ")";
        return SynthesisDiagnostic{"leader: eigenvalue assumption", msg.str()};
    }
    if (!check_observability(scenario.leader)) {
        return SynthesisDiagnostic{"leader: observability",
                                   "the pair (R, S) is not observable"};
    }

    const GraphAssumptionReport graph_report = check_assumption_graph(scenario.graph);
    if (!graph_report.holds) {
        if (!graph_report.simple)
            return SynthesisDiagnostic{"graph: self-loops",
                                       "the follower graph must be simple"};
        if (!graph_report.has_spanning_tree)
            return SynthesisDiagnostic{"graph: no spanning tree",
                                       "no node reaches every follower"};
        return SynthesisDiagnostic{"graph: leader not connected to a root",
                                   "no root node has a positive leader gain"};
    }

    ProtocolGains protocol;
    protocol.graph = scenario.graph;
    protocol.leader = scenario.leader;

    for (std::size_t i = 0; i < scenario.followers.size(); ++i) {
        const FollowerSetup& follower = scenario.followers[i];

        const StabilizationResult stab = check_stabilization(
            follower.data, options.tol_informativity, options.stability_margin);
        if (const auto* failure = std::get_if<NotInformative>(&stab)) {
            const std::string code = failure->code == "rank"
                                         ? "stabilization: X- rank"
                                         : "stabilization: no stabilizing right inverse";
            return SynthesisDiagnostic{code, failure->detail, static_cast<int>(i)};
        }
        const auto& stab_cert = std::get<StabilizationCertificate>(stab);

        const RegulationResult reg =
            check_regulation(follower.data, follower.c, follower.d, scenario.leader,
                             options.tol_informativity);
        if (const auto* failure = std::get_if<NotInformative>(&reg)) {
            return SynthesisDiagnostic{"regulation: equations unsolvable",
                                       failure->detail, static_cast<int>(i)};
        }
        const auto& reg_cert = std::get<RegulationCertificate>(reg);

        FollowerGains gains;
        gains.k_gain = stab_cert.k_gain;
        gains.theta = stab_cert.theta;
        gains.rho = stab_cert.rho;
        gains.m_sol = reg_cert.m_sol;
        gains.pi = reg_cert.pi;
        gains.gamma = reg_cert.gamma;
        gains.residual_dynamics = reg_cert.residual_dynamics;
        gains.residual_disturbance = reg_cert.residual_disturbance;
        gains.residual_output = reg_cert.residual_output;
        protocol.followers.push_back(std::move(gains));
    }

    protocol.coupling_eigs = coupling_eigenvalues(scenario.graph);

    if (options.f_override) {
        const double radius =
            worst_radius(scenario.leader.s, *options.f_override, protocol.coupling_eigs);
        if (radius >= 1.0 - options.stability_margin) {
            std::ostringstream msg;
            msg << "supplied F leaves S - lambda F unstable (worst radius " << radius
                << ")";
            return SynthesisDiagnostic{"f-design: supplied F fails verification",
                                       msg.str()};
        }
        protocol.f = *options.f_override;
    } else {
        const std::optional<Matrix> f =
            design_f(scenario.leader, protocol.coupling_eigs, options.stability_margin);
        if (!f) {
            return SynthesisDiagnostic{
                "f-design: no simultaneous stabilizer found",
                "no grid scaling of the Riccati gain stabilizes all coupling modes"};
        }
        protocol.f = *f;
    }

    return protocol;
}

}  // namespace ddsync
