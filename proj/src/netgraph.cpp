#include "ddsync/netgraph.hpp"

#include <stdexcept>

namespace ddsync {

void validate_graph(const CommGraph& g) {
    if (g.weights.rows() != g.weights.cols())
        throw std::invalid_argument("graph: weight matrix must be square");
    if (!g.weights.all_finite())
        throw std::invalid_argument("graph: non-finite weights");
    if (g.leader_gains.size() != g.n())
        throw std::invalid_argument("graph: leader gain vector length mismatch");
    for (std::size_t i = 0; i < g.n(); ++i) {
        if (g.weights(i, i) != 0.0)
            throw std::invalid_argument("graph: self-loops are not allowed");
        for (std::size_t j = 0; j < g.n(); ++j)
            if (g.weights(i, j) < 0.0)
                throw std::invalid_argument("graph: negative edge weight");
        if (!(g.leader_gains[i] >= 0.0))
            throw std::invalid_argument("graph: negative leader gain");
    }
}

Matrix degree_matrix(const CommGraph& g) {
    const std::size_t n = g.n();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += g.weights(i, j);
        d(i, i) = sum;
    }
    return d;
}

Matrix laplacian(const CommGraph& g) {
    Matrix l = degree_matrix(g);
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) l(i, j) -= g.weights(i, j);
    return l;
}

namespace {

// Nodes reachable from `start` along edges j -> i (weights(i, j) > 0).
std::size_t count_reachable(const CommGraph& g, std::size_t start) {
    const std::size_t n = g.n();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const std::size_t j = stack.back();
        stack.pop_back();
        for (std::size_t i = 0; i < n; ++i) {
            if (!seen[i] && g.weights(i, j) > 0.0) {
                seen[i] = true;
                ++count;
                stack.push_back(i);
            }
        }
    }
    return count;
}

}  // namespace

GraphAssumptionReport check_assumption_graph(const CommGraph& g) {
    GraphAssumptionReport report;
    const std::size_t n = g.n();

    report.simple = true;
    for (std::size_t i = 0; i < n; ++i)
        if (g.weights(i, i) != 0.0) report.simple = false;

    for (std::size_t r = 0; r < n; ++r)
        if (count_reachable(g, r) == n) report.roots.push_back(r);
    report.has_spanning_tree = !report.roots.empty();

    for (std::size_t r : report.roots)
        if (g.leader_gains[r] > 0.0) report.leader_at_root = true;

    report.holds = report.simple && report.has_spanning_tree && report.leader_at_root;
    return report;
}

Matrix coupling_matrix(const CommGraph& g) {
    const std::size_t n = g.n();
    Matrix m = laplacian(g);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += g.leader_gains[i];
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < n; ++j) d += g.weights(i, j);
        const double scale = 1.0 + d + g.leader_gains[i];
        for (std::size_t j = 0; j < n; ++j) m(i, j) /= scale;
    }
    return m;
}

std::vector<Complex> coupling_eigenvalues(const CommGraph& g) {
    return eigenvalues(coupling_matrix(g));
}

}  // namespace ddsync
