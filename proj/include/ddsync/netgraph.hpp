#pragma once

#include <cstddef>
#include <vector>

#include "ddsync/matcore.hpp"

namespace ddsync {

/// Weighted directed communication graph over the followers plus the
/// leader attachment vector. Convention: weights(i, j) = a_ij > 0 means an
/// edge from j to i, i.e. follower i receives follower j's controller
/// state. leader_gains[i] = g_i > 0 means the leader shares its state with
/// follower i.
struct CommGraph {
    Matrix weights;                    // n x n, zero diagonal, nonnegative
    std::vector<double> leader_gains;  // length n, nonnegative

    std::size_t n() const { return weights.rows(); }
};

/// Throws std::invalid_argument when the graph violates its structural
/// invariants (square, zero diagonal, nonnegative, gain length).
void validate_graph(const CommGraph& g);

/// diag(d_1..d_n) with d_i the in-weight sum of node i.
Matrix degree_matrix(const CommGraph& g);

/// L = D - A; every row sums to zero.
Matrix laplacian(const CommGraph& g);

struct GraphAssumptionReport {
    bool holds = false;
    bool simple = false;             // no self loops
    bool has_spanning_tree = false;  // some root reaches every follower
    bool leader_at_root = false;     // some root has g > 0
    std::vector<std::size_t> roots;  // nodes from which all followers are reachable
};

/// Checks the standing connectivity assumption: the follower graph is
/// simple and contains a spanning tree, and the leader is attached to at
/// least one root node. Root detection is exact graph reachability.
GraphAssumptionReport check_assumption_graph(const CommGraph& g);

/// (I + D + G)^{-1} (L + G); the inverse is of a diagonal matrix with
/// entries 1 + d_i + g_i >= 1, so it always exists.
Matrix coupling_matrix(const CommGraph& g);

/// Spectrum of the coupling matrix; the shared gain F must render
/// S - lambda F Schur-stable for every returned lambda.
std::vector<Complex> coupling_eigenvalues(const CommGraph& g);

}  // namespace ddsync
