#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ddsync {

using Complex = std::complex<double>;

/// Dense real matrix, row-major storage. Dimensions may be zero (empty
/// blocks are legal operands wherever the shapes conform).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(std::initializer_list<std::initializer_list<double>> init);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> entries);
    static Matrix column_vector(std::span<const double> entries);
    static Matrix row_vector(std::span<const double> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transpose() const;
    Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;
    Matrix columns(std::size_t col0, std::size_t count) const;
    Matrix column(std::size_t j) const { return columns(j, 1); }
    void set_block(std::size_t row0, std::size_t col0, const Matrix& b);
    void set_column(std::size_t j, const Matrix& col) { set_block(0, j, col); }

    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;
    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator-(const Matrix& m);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(double s, Matrix m);
Matrix operator*(Matrix m, double s);

Matrix hstack(std::span<const Matrix> blocks);
Matrix vstack(std::span<const Matrix> blocks);
Matrix hstack(std::initializer_list<Matrix> blocks);
Matrix vstack(std::initializer_list<Matrix> blocks);

/// Kronecker product: block (i,j) of the result is a(i,j)*b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Column-stacking vectorization, the convention under which
/// vec(A*X*B) = kron(B^T, A) * vec(X).
Matrix vec(const Matrix& a);
Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols);

struct LstsqResult {
    Matrix solution;
    double residual;  // Frobenius norm of a*x - b
};

/// Minimum-norm least-squares solve of a*x = b via a complete orthogonal
/// decomposition (Householder QR with column pivoting on both sides).
/// Rank-deficient a is fine; among all residual minimizers the returned x
/// has minimal Frobenius norm.
LstsqResult lstsq_min_norm(const Matrix& a, const Matrix& b);

/// Gaussian elimination with partial pivoting; throws on singular input.
Matrix solve_square(const Matrix& a, const Matrix& b);

/// Determinant via LU with partial pivoting (independent of the QR
/// eigenvalue path, so it doubles as a cross-check oracle).
double determinant(const Matrix& a);

std::size_t rank(const Matrix& a, double rtol = -1.0);

/// Orthonormal basis of ker(a) as matrix columns (n x nullity).
Matrix kernel_basis(const Matrix& a, double rtol = -1.0);

/// All eigenvalues with multiplicity: balance, Householder reduction to
/// Hessenberg form, then Francis double-shift QR iteration.
std::vector<Complex> eigenvalues(const Matrix& a);

double spectral_radius(const Matrix& a);

/// Strict Schur stability with margin: spectral_radius(a) < 1 - tol.
bool is_schur(const Matrix& a, double tol = 1e-9);

/// Fixed-point solve of P = S^T P S - S^T P (P+I)^{-1} P S + Q from
/// P0 = Q. Requires symmetric positive definite Q; throws if the
/// residual does not reach tol within max_iter sweeps.
Matrix dare_fixed_point(const Matrix& s, const Matrix& q, double tol = 1e-12,
                        std::size_t max_iter = 10000);

/// Real 2n x 2n embedding [[X, -Y],[Y, X]] of the complex matrix X + iY.
/// Its spectrum is the union of the spectra of X+iY and its conjugate,
/// so spectral radii agree.
Matrix complex_embed(const Matrix& re, const Matrix& im);

/// Embedding of lambda * a; spectral_radius of the result equals
/// |lambda| * spectral_radius(a).
Matrix complex_scale_embed(const Matrix& a, Complex lambda);

struct SymmetricEigenResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // orthonormal columns
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
SymmetricEigenResult symmetric_eigen(const Matrix& a);

std::vector<double> singular_values(const Matrix& a);

}  // namespace ddsync
