#include "ddsync/informativity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ddsync/synthesis.hpp"

namespace ddsync {

namespace {

// Right-hand side of the certificate constraint system
// [X-; U-; W-] Theta = [I; K; 0].
Matrix certificate_rhs(const TrajectoryData& data, const Matrix& k) {
    const std::size_t n = data.state_dim(), q = data.disturbance_dim();
    if (q == 0) return vstack({Matrix::identity(n), k});
    return vstack({Matrix::identity(n), k, Matrix(q, n)});
}

StabilizationCertificate make_certificate(const TrajectoryData& data,
                                          const Matrix& theta) {
    auto [x_minus, x_plus] = partition(data);
    (void)x_minus;
    StabilizationCertificate cert;
    cert.theta = theta;
    cert.k_gain = data.u_minus * theta;
    cert.closed_loop = x_plus * theta;
    cert.rho = spectral_radius(cert.closed_loop);
    return cert;
}

}  // namespace

StabilizationResult check_stabilization(const TrajectoryData& data, double tol,
                                        double stability_margin) {
    validate_data(data);
    auto [x_minus, x_plus] = partition(data);
    const std::size_t n = data.state_dim(), m = data.input_dim(),
                      q = data.disturbance_dim();

    if (rank(x_minus) < n) {
        std::ostringstream msg;
        msg << "X- has row rank below the state dimension " << n
            << "; no right inverse exists";
        return NotInformative{"rank", msg.str()};
    }

    const Matrix stacked = stacked_data(data);
    if (rank(stacked) == n + m + q) {
        // Singleton consistency set: identify the system, design a gain by
        // Riccati iteration and pin Theta down by the constraint system.
        const SystemTriple sys = *identify_unique(data);
        const std::optional<Matrix> k = design_state_feedback(sys.a, sys.b);
        if (!k) {
            return NotInformative{
                "stabilization",
                "unique consistent system admits no stabilizing state feedback"};
        }
        auto [theta, residual] = lstsq_min_norm(stacked, certificate_rhs(data, *k));
        StabilizationCertificate cert = make_certificate(data, theta);
        if (residual > tol || cert.rho >= 1.0 - stability_margin) {
            return NotInformative{"stabilization",
                                  "certificate construction failed numerically"};
        }
        return cert;
    }

    // Non-singleton set: search for a stabilizing constrained right inverse.
    if (std::optional<Matrix> theta = sdp_feasibility(data, 5000, tol)) {
        StabilizationCertificate cert = make_certificate(data, *theta);
        if (cert.rho < 1.0 - stability_margin) return cert;
    }
    return NotInformative{"stabilization",
                          "no stabilizing right inverse found (feasibility search "
                          "inconclusive)"};
}

bool verify_k(const TrajectoryData& data, const Matrix& k, double tol,
              double stability_margin) {
    validate_data(data);
    if (k.rows() != data.input_dim() || k.cols() != data.state_dim())
        throw std::invalid_argument("verify_k: gain shape mismatch");
    auto [theta, residual] = lstsq_min_norm(stacked_data(data), certificate_rhs(data, k));
    if (residual > tol) return false;
    auto [x_minus, x_plus] = partition(data);
    (void)x_minus;
    return is_schur(x_plus * theta, stability_margin);
}

std::optional<Matrix> sdp_feasibility(const TrajectoryData& data, std::size_t max_iter,
                                      double tol) {
    validate_data(data);
    auto [x_minus, x_plus] = partition(data);
    const std::size_t n = data.state_dim(), tau = data.tau();
    if (rank(x_minus) < n)
        throw std::invalid_argument("sdp_feasibility: X- must have full row rank");

    constexpr double kMargin = 1e-6;  // definiteness floor inside the cone

    // Theta = Nw Xi keeps W- Theta = 0 exact throughout.
    const Matrix nw = data.disturbance_dim() > 0 ? kernel_basis(data.w_minus)
                                                 : Matrix::identity(tau);
    const std::size_t kw = nw.cols();
    if (kw == 0) return std::nullopt;

    const auto psi = [&](const Matrix& theta) {
        const Matrix p = x_minus * theta;
        const Matrix h = x_plus * theta;
        Matrix z(2 * n, 2 * n);
        z.set_block(0, 0, p);
        z.set_block(n, n, p);
        z.set_block(0, n, h);
        z.set_block(n, 0, h.transpose());
        return z;
    };

    // Columns of the linear map vec(Xi) -> vec(psi(Nw Xi)).
    Matrix map(4 * n * n, kw * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < kw; ++i) {
            Matrix basis(kw, n);
            basis(i, j) = 1.0;
            map.set_column(j * kw + i, vec(psi(nw * basis)));
        }

    // start from the min-norm solution of {X- Theta = I, W- Theta = 0},
    // which makes P = I the first cone candidate
    const Matrix constraints = data.disturbance_dim() > 0
                                   ? vstack({x_minus, data.w_minus})
                                   : x_minus;
    const Matrix start_rhs =
        data.disturbance_dim() > 0
            ? vstack({Matrix::identity(n), Matrix(data.disturbance_dim(), n)})
            : Matrix::identity(n);
    Matrix xi = nw.transpose() * lstsq_min_norm(constraints, start_rhs).solution;

    for (std::size_t it = 0; it < max_iter; ++it) {
        const Matrix theta = nw * xi;
        Matrix z = psi(theta);
        z = 0.5 * (z + z.transpose());
        const SymmetricEigenResult eig = symmetric_eigen(z);
        if (eig.values.front() >= 0.5 * kMargin) {
            // normalize to a plain right inverse
            Matrix p = x_minus * theta;
            p = 0.5 * (p + p.transpose());
            Matrix normalized = solve_square(p, theta.transpose()).transpose();
            // the iterate meets the affine constraints only to the cone
            // margin; snap back exactly with a minimal-norm correction
            normalized -= lstsq_min_norm(constraints,
                                         constraints * normalized - start_rhs)
                              .solution;
            const bool ok =
                (x_minus * normalized - Matrix::identity(n)).frobenius_norm() <= tol &&
                (data.disturbance_dim() == 0 ||
                 (data.w_minus * normalized).frobenius_norm() <= tol) &&
                is_schur(x_plus * normalized);
            if (ok) return normalized;
            return std::nullopt;
        }
        // project onto {Z >= margin I} and pull back through the map
        std::vector<double> clamped = eig.values;
        for (double& v : clamped) v = std::max(v, kMargin);
        const Matrix zp = eig.vectors * Matrix::diagonal(clamped) * eig.vectors.transpose();
        const Matrix coeff = lstsq_min_norm(map, vec(zp)).solution;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < kw; ++i) xi(i, j) = coeff(j * kw + i, 0);
    }
    return std::nullopt;
}

RegulationResult check_regulation(const TrajectoryData& data, const Matrix& c,
                                  const Matrix& d, const LeaderSpec& leader,
                                  double tol) {
    validate_data(data);
    validate_leader(leader);
    const std::size_t n = data.state_dim(), m = data.input_dim(),
                      q = data.disturbance_dim(), tau = data.tau();
    const std::size_t r = leader.state_dim(), p = leader.output_dim();
    if (c.rows() != p || c.cols() != n)
        throw std::invalid_argument("check_regulation: C shape mismatch");
    if (d.rows() != p || d.cols() != m)
        throw std::invalid_argument("check_regulation: D shape mismatch");

    auto [x_minus, x_plus] = partition(data);
    const Matrix identity_r = Matrix::identity(r);
    const Matrix output_data = c * x_minus + d * data.u_minus;

    // vec(X+ M) - vec(X- M S) = 0, vec(W- M) = 0, vec((C X- + D U-) M) = vec(R)
    std::vector<Matrix> lhs_blocks{kron(identity_r, x_plus) -
                                   kron(leader.s.transpose(), x_minus)};
    std::vector<Matrix> rhs_blocks{Matrix(n * r, 1)};
    if (q > 0) {
        lhs_blocks.push_back(kron(identity_r, data.w_minus));
        rhs_blocks.push_back(Matrix(q * r, 1));
    }
    lhs_blocks.push_back(kron(identity_r, output_data));
    rhs_blocks.push_back(vec(leader.r_out));

    auto [m_vec, lstsq_residual] =
        lstsq_min_norm(vstack(std::span<const Matrix>(lhs_blocks)),
                       vstack(std::span<const Matrix>(rhs_blocks)));
    (void)lstsq_residual;

    RegulationCertificate cert;
    cert.m_sol = unvec(m_vec, tau, r);
    cert.pi = x_minus * cert.m_sol;
    cert.gamma = data.u_minus * cert.m_sol;
    cert.residual_dynamics =
        (x_plus * cert.m_sol - x_minus * cert.m_sol * leader.s).frobenius_norm();
    cert.residual_disturbance =
        q > 0 ? (data.w_minus * cert.m_sol).frobenius_norm() : 0.0;
    cert.residual_output =
        (c * cert.pi + d * cert.gamma - leader.r_out).frobenius_norm();

    const double total = std::sqrt(cert.residual_dynamics * cert.residual_dynamics +
                                   cert.residual_disturbance * cert.residual_disturbance +
                                   cert.residual_output * cert.residual_output);
    if (total > tol) {
        std::ostringstream msg;
        msg << "regulator equations unsolvable from the data (residual " << total << ")";
        return NotInformative{"regulation", msg.str()};
    }
    return cert;
}

bool verify_regulation_on_models(const RegulationCertificate& cert,
                                 const std::vector<SystemTriple>& systems,
                                 const Matrix& c, const Matrix& d,
                                 const LeaderSpec& leader, double tol) {
    for (const SystemTriple& sys : systems) {
        const double dyn =
            (sys.a * cert.pi + sys.b * cert.gamma - cert.pi * leader.s).frobenius_norm();
        const double out =
            (c * cert.pi + d * cert.gamma - leader.r_out).frobenius_norm();
        if (dyn > tol || out > tol) return false;
    }
    return true;
}

}  // namespace ddsync
