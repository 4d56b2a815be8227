#include "ddsync/datamod.hpp"

#include <stdexcept>

#include "ddsync/rng.hpp"

namespace ddsync {

void validate_data(const TrajectoryData& data) {
    const std::size_t tau = data.tau();
    if (tau == 0) throw std::invalid_argument("data: at least one sample required");
    if (data.x_full.cols() != tau + 1)
        throw std::invalid_argument("data: X must have tau + 1 columns");
    if (data.w_minus.rows() > 0 && data.w_minus.cols() != tau)
        throw std::invalid_argument("data: W- must have tau columns");
    if (!data.u_minus.all_finite() || !data.w_minus.all_finite() ||
        !data.x_full.all_finite())
        throw std::invalid_argument("data: non-finite entries");
}

StatePartition partition(const TrajectoryData& data) {
    if (data.x_full.cols() < 2)
        throw std::invalid_argument("partition: need at least two state samples");
    const std::size_t tau = data.x_full.cols() - 1;
    return {data.x_full.columns(0, tau), data.x_full.columns(1, tau)};
}

void validate_system(const TrueSystem& sys) {
    const std::size_t n = sys.a.rows();
    if (sys.a.cols() != n) throw std::invalid_argument("system: A must be square");
    if (sys.b.rows() != n) throw std::invalid_argument("system: B row count mismatch");
    if (sys.e.rows() != n && sys.e.rows() + sys.e.cols() != 0)
        throw std::invalid_argument("system: E row count mismatch");
    if (sys.c.cols() != n) throw std::invalid_argument("system: C column count mismatch");
    if (sys.d.rows() != sys.c.rows() || sys.d.cols() != sys.b.cols())
        throw std::invalid_argument("system: D shape mismatch");
}

TrajectoryData generate_data(const TrueSystem& sys, const Matrix& x0, const Matrix& u,
                             const Matrix& w) {
    const std::size_t n = sys.a.rows();
    const std::size_t tau = u.cols();
    if (x0.rows() != n || x0.cols() != 1)
        throw std::invalid_argument("generate_data: x0 shape mismatch");
    if (u.rows() != sys.b.cols())
        throw std::invalid_argument("generate_data: input row count mismatch");
    if (w.rows() != sys.e.cols())
        throw std::invalid_argument("generate_data: disturbance row count mismatch");
    if (w.rows() > 0 && w.cols() != tau)
        throw std::invalid_argument("generate_data: disturbance column count mismatch");

    TrajectoryData data{u, w, Matrix(n, tau + 1)};
    Matrix x = x0;
    for (std::size_t k = 0; k <= tau; ++k) {
        data.x_full.set_column(k, x);
        if (k < tau) {
            Matrix next = sys.a * x + sys.b * u.column(k);
            if (w.rows() > 0) next += sys.e * w.column(k);
            x = std::move(next);
        }
    }
    return data;
}

Matrix stacked_data(const TrajectoryData& data) {
    auto [x_minus, x_plus] = partition(data);
    (void)x_plus;
    if (data.disturbance_dim() == 0) return vstack({x_minus, data.u_minus});
    return vstack({x_minus, data.u_minus, data.w_minus});
}

std::optional<SystemTriple> identify_unique(const TrajectoryData& data) {
    validate_data(data);
    const std::size_t n = data.state_dim(), m = data.input_dim(),
                      q = data.disturbance_dim();
    const Matrix stacked = stacked_data(data);
    if (rank(stacked) < n + m + q) return std::nullopt;
    auto [x_minus, x_plus] = partition(data);
    (void)x_minus;
    // [A B E] = X+ * stacked^dagger, solved through the transposed system
    const Matrix abe = lstsq_min_norm(stacked.transpose(), x_plus.transpose())
                           .solution.transpose();
    SystemTriple sys{abe.block(0, 0, n, n), abe.block(0, n, n, m),
                     abe.block(0, n + m, n, q)};
    return sys;
}

double consistency_residual(const TrajectoryData& data, const SystemTriple& sys) {
    auto [x_minus, x_plus] = partition(data);
    if (sys.a.rows() != data.state_dim() || sys.a.cols() != data.state_dim() ||
        sys.b.cols() != data.input_dim() || sys.e.cols() != data.disturbance_dim())
        throw std::invalid_argument("consistency_residual: dimension mismatch");
    Matrix predicted = sys.a * x_minus + sys.b * data.u_minus;
    if (data.disturbance_dim() > 0) predicted += sys.e * data.w_minus;
    return (x_plus - predicted).frobenius_norm();
}

std::vector<SystemTriple> sample_consistent_systems(const TrajectoryData& data,
                                                    std::size_t count, double scale,
                                                    std::uint64_t seed) {
    validate_data(data);
    const std::size_t n = data.state_dim(), m = data.input_dim(),
                      q = data.disturbance_dim();
    const Matrix stacked = stacked_data(data);
    auto [x_minus, x_plus] = partition(data);
    (void)x_minus;

    // particular solution (exact when the data are consistent with some
    // linear system, which recorded data always are)
    auto [abe_t, residual] = lstsq_min_norm(stacked.transpose(), x_plus.transpose());
    if (residual > 1e-8 * std::max(1.0, x_plus.frobenius_norm()))
        throw std::invalid_argument(
            "sample_consistent_systems: data admit no consistent linear system");
    const Matrix base = abe_t.transpose();

    // rows of admissible perturbations live in ker(stacked^T)
    const Matrix annihilator = kernel_basis(stacked.transpose());
    const std::size_t dim = annihilator.cols();

    Rng rng(seed);
    std::vector<SystemTriple> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        Matrix abe = base;
        if (dim > 0 && scale > 0.0) {
            Matrix coeff(n, dim);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < dim; ++j) coeff(i, j) = rng.normal();
            Matrix delta = coeff * annihilator.transpose();
            const double norm = delta.frobenius_norm();
            if (norm > 0.0) {
                delta *= scale * rng.uniform() / norm;
                abe += delta;
            }
        }
        out.push_back({abe.block(0, 0, n, n), abe.block(0, n, n, m),
                       abe.block(0, n + m, n, q)});
    }
    return out;
}

}  // namespace ddsync
