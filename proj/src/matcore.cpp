#include "ddsync/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddsync {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void require_square(const Matrix& a, const char* who) {
    if (a.rows() != a.cols())
        throw std::invalid_argument(std::string(who) + ": matrix must be square");
}

void require_finite(const Matrix& a, const char* who) {
    if (!a.all_finite())
        throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
        if (row.size() != cols_)
            throw std::invalid_argument("Matrix: ragged initializer list");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

Matrix Matrix::column_vector(std::span<const double> entries) {
    Matrix m(entries.size(), 1);
    std::copy(entries.begin(), entries.end(), m.data_.begin());
    return m;
}

Matrix Matrix::row_vector(std::span<const double> entries) {
    Matrix m(1, entries.size());
    std::copy(entries.begin(), entries.end(), m.data_.begin());
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                     std::size_t ncols) const {
    require(row0 + nrows <= rows_ && col0 + ncols <= cols_, "Matrix::block: out of range");
    Matrix b(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
    return b;
}

Matrix Matrix::columns(std::size_t col0, std::size_t count) const {
    return block(0, col0, rows_, count);
}

void Matrix::set_block(std::size_t row0, std::size_t col0, const Matrix& b) {
    require(row0 + b.rows() <= rows_ && col0 + b.cols() <= cols_,
            "Matrix::set_block: out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(row0 + i, col0 + j) = b(i, j);
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    require(same_shape(rhs), "Matrix::operator+=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    require(same_shape(rhs), "Matrix::operator-=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }

Matrix operator-(const Matrix& m) {
    Matrix r = m;
    for (double& v : r.data()) v = -v;
    return r;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    require(lhs.cols() == rhs.rows(), "Matrix::operator*: inner dimension mismatch");
    Matrix r(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const double a = lhs(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) r(i, j) += a * rhs(k, j);
        }
    return r;
}

Matrix operator*(double s, Matrix m) { return m *= s; }
Matrix operator*(Matrix m, double s) { return m *= s; }

Matrix hstack(std::span<const Matrix> blocks) {
    if (blocks.empty()) return {};
    std::size_t cols = 0;
    for (const Matrix& b : blocks) {
        require(b.rows() == blocks[0].rows(), "hstack: row mismatch");
        cols += b.cols();
    }
    Matrix r(blocks[0].rows(), cols);
    std::size_t at = 0;
    for (const Matrix& b : blocks) {
        r.set_block(0, at, b);
        at += b.cols();
    }
    return r;
}

Matrix vstack(std::span<const Matrix> blocks) {
    if (blocks.empty()) return {};
    std::size_t rows = 0;
    for (const Matrix& b : blocks) {
        require(b.cols() == blocks[0].cols(), "vstack: column mismatch");
        rows += b.rows();
    }
    Matrix r(rows, blocks[0].cols());
    std::size_t at = 0;
    for (const Matrix& b : blocks) {
        r.set_block(at, 0, b);
        at += b.rows();
    }
    return r;
}

Matrix hstack(std::initializer_list<Matrix> blocks) {
    return hstack(std::span<const Matrix>(blocks.begin(), blocks.size()));
}

Matrix vstack(std::initializer_list<Matrix> blocks) {
    return vstack(std::span<const Matrix>(blocks.begin(), blocks.size()));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

Matrix vec(const Matrix& a) {
    Matrix v(a.rows() * a.cols(), 1);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) v(j * a.rows() + i, 0) = a(i, j);
    return v;
}

Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols) {
    require(v.cols() == 1 && v.rows() == rows * cols, "unvec: size mismatch");
    Matrix a(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) a(i, j) = v(j * rows + i, 0);
    return a;
}

// ---------------------------------------------------------------------------
// Householder QR with column pivoting
// ---------------------------------------------------------------------------

namespace {

// Packed factorization A*P = Q*R. Reflectors are stored below the diagonal
// with the v(0)=1 convention; betas separately.
struct QrPivot {
    Matrix qr;
    std::vector<double> beta;
    std::vector<std::size_t> perm;
    std::size_t rank = 0;

    std::size_t m() const { return qr.rows(); }
    std::size_t n() const { return qr.cols(); }

    // b <- Q^T b
    void apply_qt(Matrix& b) const {
        const std::size_t steps = beta.size();
        for (std::size_t k = 0; k < steps; ++k) apply_reflector(k, b);
    }

    // b <- Q b
    void apply_q(Matrix& b) const {
        for (std::size_t k = beta.size(); k-- > 0;) apply_reflector(k, b);
    }

    void apply_reflector(std::size_t k, Matrix& b) const {
        if (beta[k] == 0.0) return;
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double dot = b(k, j);
            for (std::size_t i = k + 1; i < m(); ++i) dot += qr(i, k) * b(i, j);
            dot *= beta[k];
            b(k, j) -= dot;
            for (std::size_t i = k + 1; i < m(); ++i) b(i, j) -= dot * qr(i, k);
        }
    }
};

QrPivot qr_col_pivot(const Matrix& a, double rtol, bool pivot = true) {
    QrPivot f;
    f.qr = a;
    const std::size_t m = a.rows(), n = a.cols();
    const std::size_t steps = std::min(m, n);
    f.beta.assign(steps, 0.0);
    f.perm.resize(n);
    for (std::size_t j = 0; j < n; ++j) f.perm[j] = j;

    for (std::size_t k = 0; k < steps; ++k) {
        if (pivot) {
            std::size_t best = k;
            double best_norm = -1.0;
            for (std::size_t j = k; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = k; i < m; ++i) s += f.qr(i, j) * f.qr(i, j);
                if (s > best_norm) {
                    best_norm = s;
                    best = j;
                }
            }
            if (best != k) {
                for (std::size_t i = 0; i < m; ++i) std::swap(f.qr(i, k), f.qr(i, best));
                std::swap(f.perm[k], f.perm[best]);
            }
        }
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += f.qr(i, k) * f.qr(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;  // column already zero, beta stays 0
        const double alpha = f.qr(k, k) >= 0.0 ? -norm : norm;
        const double v0 = f.qr(k, k) - alpha;
        f.qr(k, k) = alpha;
        for (std::size_t i = k + 1; i < m; ++i) f.qr(i, k) /= v0;
        f.beta[k] = -v0 / alpha;  // = 2 / (v^T v) with v(0)=1 scaling
        // update trailing columns
        for (std::size_t j = k + 1; j < n; ++j) {
            double dot = f.qr(k, j);
            for (std::size_t i = k + 1; i < m; ++i) dot += f.qr(i, k) * f.qr(i, j);
            dot *= f.beta[k];
            f.qr(k, j) -= dot;
            for (std::size_t i = k + 1; i < m; ++i) f.qr(i, j) -= dot * f.qr(i, k);
        }
    }

    const double scale = std::abs(steps > 0 ? f.qr(0, 0) : 0.0);
    const double tol =
        (rtol >= 0.0 ? rtol : kEps * static_cast<double>(std::max(m, n))) * scale;
    f.rank = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        if (std::abs(f.qr(k, k)) <= tol) break;
        ++f.rank;
    }
    return f;
}

}  // namespace

LstsqResult lstsq_min_norm(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "lstsq_min_norm: row count mismatch");
    require_finite(a, "lstsq_min_norm");
    require_finite(b, "lstsq_min_norm");
    const std::size_t n = a.cols(), k = b.cols();
    if (n == 0 || k == 0) return {Matrix(n, k), b.frobenius_norm()};
    if (a.rows() == 0) return {Matrix(n, k), 0.0};

    QrPivot f = qr_col_pivot(a, -1.0);
    const std::size_t r = f.rank;
    Matrix c = b;
    f.apply_qt(c);

    double residual = 0.0;
    for (std::size_t i = r; i < c.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) residual += c(i, j) * c(i, j);
    residual = std::sqrt(residual);

    if (r == 0) return {Matrix(n, k), residual};

    Matrix z(n, k);
    if (r == n) {
        // full column rank: plain back substitution on R(0:n,0:n)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = n; i-- > 0;) {
                double s = c(i, j);
                for (std::size_t l = i + 1; l < n; ++l) s -= f.qr(i, l) * z(l, j);
                z(i, j) = s / f.qr(i, i);
            }
    } else {
        // complete the orthogonal decomposition: R1 = [W^T 0] V^T with
        // R1 = R(0:r, 0:n), via unpivoted QR of R1^T.
        Matrix r1t(n, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i; j < n; ++j) r1t(j, i) = f.qr(i, j);
        QrPivot g = qr_col_pivot(r1t, -1.0, /*pivot=*/false);
        // forward substitution W^T y = c1  (W^T lower triangular, W = g.R)
        Matrix y(r, k);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < r; ++i) {
                double s = c(i, j);
                for (std::size_t l = 0; l < i; ++l) s -= g.qr(l, i) * y(l, j);
                y(i, j) = s / g.qr(i, i);
            }
        Matrix yz(n, k);
        yz.set_block(0, 0, y);
        g.apply_q(yz);  // z = V [y; 0]
        z = yz;
    }

    Matrix x(n, k);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < k; ++l) x(f.perm[j], l) = z(j, l);
    return {std::move(x), residual};
}

std::size_t rank(const Matrix& a, double rtol) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    return qr_col_pivot(a, rtol).rank;
}

Matrix kernel_basis(const Matrix& a, double rtol) {
    const std::size_t n = a.cols();
    if (n == 0) return Matrix(0, 0);
    if (a.rows() == 0) return Matrix::identity(n);
    QrPivot f = qr_col_pivot(a.transpose(), rtol);
    const std::size_t r = f.rank;
    // ker(a) is the orthogonal complement of col(a^T): columns r..n-1 of Q.
    Matrix basis(n, n - r);
    for (std::size_t j = 0; j < n - r; ++j) {
        Matrix e(n, 1);
        e(r + j, 0) = 1.0;
        f.apply_q(e);
        basis.set_block(0, j, e);
    }
    return basis;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting: square solves and determinant
// ---------------------------------------------------------------------------

namespace {

struct Lu {
    Matrix lu;
    std::vector<std::size_t> piv;
    int sign = 1;
    bool singular = false;
};

Lu lu_factor(const Matrix& a) {
    Lu f;
    f.lu = a;
    const std::size_t n = a.rows();
    f.piv.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.piv[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(f.lu(i, k)) > std::abs(f.lu(p, k))) p = i;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
            std::swap(f.piv[k], f.piv[p]);
            f.sign = -f.sign;
        }
        const double pivot = f.lu(k, k);
        if (pivot == 0.0) {
            f.singular = true;
            continue;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            f.lu(i, k) /= pivot;
            const double m = f.lu(i, k);
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

}  // namespace

Matrix solve_square(const Matrix& a, const Matrix& b) {
    require_square(a, "solve_square");
    require(a.rows() == b.rows(), "solve_square: row count mismatch");
    const std::size_t n = a.rows(), k = b.cols();
    Lu f = lu_factor(a);
    if (f.singular) throw std::runtime_error("solve_square: singular matrix");
    Matrix x(n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) x(i, j) = b(f.piv[i], j);
    // forward substitution (unit lower)
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t l = 0; l < i; ++l) {
            const double m = f.lu(i, l);
            if (m == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) x(i, j) -= m * x(l, j);
        }
    // back substitution
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t l = i + 1; l < n; ++l) {
            const double m = f.lu(i, l);
            if (m == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) x(i, j) -= m * x(l, j);
        }
        for (std::size_t j = 0; j < k; ++j) x(i, j) /= f.lu(i, i);
    }
    return x;
}

double determinant(const Matrix& a) {
    require_square(a, "determinant");
    if (a.rows() == 0) return 1.0;
    Lu f = lu_factor(a);
    if (f.singular) return 0.0;
    double det = f.sign;
    for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
    return det;
}

// ---------------------------------------------------------------------------
// Nonsymmetric eigenvalues: balance + Hessenberg + Francis double-shift QR
// ---------------------------------------------------------------------------

namespace {

// Diagonal similarity scaling (radix-2) to even out row/column norms.
void balance_in_place(Matrix& a) {
    const std::size_t n = a.rows();
    constexpr double radix = 2.0;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / radix) {
                c *= radix;
                r /= radix;
                f *= radix;
            }
            while (c >= r * radix) {
                c /= radix;
                r *= radix;
                f /= radix;
            }
            if ((c + r) < 0.95 * s && f != 1.0) {
                done = false;
                for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

// Householder similarity reduction to upper Hessenberg form.
void hessenberg_in_place(Matrix& a) {
    const std::size_t n = a.rows();
    if (n < 3) return;
    std::vector<double> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = a(k + 1, k) >= 0.0 ? -norm : norm;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a(i, k);
            if (i == k + 1) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        // A <- P A, rows k+1..n-1
        for (std::size_t j = k; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) dot += v[i] * a(i, j);
            dot *= beta;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= dot * v[i];
        }
        // A <- A P, all rows
        for (std::size_t i = 0; i < n; ++i) {
            double dot = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) dot += a(i, j) * v[j];
            dot *= beta;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= dot * v[j];
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix. Classic hqr
// scheme: deflate trailing 1x1/2x2 blocks, exceptional shifts every 10
// stalled sweeps.
std::vector<Complex> hqr_eigenvalues(Matrix h) {
    const long n = static_cast<long>(h.rows());
    std::vector<Complex> out(static_cast<std::size_t>(n));
    if (n == 0) return out;

    double anorm = 0.0;
    for (long i = 0; i < n; ++i)
        for (long j = std::max<long>(i - 1, 0); j < n; ++j)
            anorm += std::abs(h(i, j));
    if (anorm == 0.0) return out;  // zero matrix

    long nn = n - 1;
    double t = 0.0;
    double p = 0.0, q = 0.0, r = 0.0, x = 0.0, y = 0.0, z = 0.0, w = 0.0, s = 0.0;
    while (nn >= 0) {
        long its = 0;
        long l;
        do {
            for (l = nn; l >= 1; --l) {
                s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(h(l, l - 1)) <= kEps * s) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            x = h(nn, nn);
            if (l == nn) {
                out[nn] = Complex(x + t, 0.0);
                --nn;
            } else {
                y = h(nn - 1, nn - 1);
                w = h(nn, nn - 1) * h(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        out[nn - 1] = out[nn] = Complex(x + z, 0.0);
                        if (z != 0.0) out[nn] = Complex(x - w / z, 0.0);
                    } else {
                        out[nn] = Complex(x + p, z);
                        out[nn - 1] = std::conj(out[nn]);
                    }
                    nn -= 2;
                } else {
                    if (its == 30)
                        throw std::runtime_error("eigenvalues: QR iteration did not converge");
                    if (its == 10 || its == 20) {
                        t += x;
                        for (long i = 0; i <= nn; ++i) h(i, i) -= x;
                        s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    long m;
                    for (m = nn - 2; m >= l; --m) {
                        z = h(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
                        q = h(m + 1, m + 1) - z - r - s;
                        r = h(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) +
                                           std::abs(h(m + 1, m + 1)));
                        if (u <= kEps * v) break;
                    }
                    for (long i = m + 2; i <= nn; ++i) {
                        h(i, i - 2) = 0.0;
                        if (i != m + 2) h(i, i - 3) = 0.0;
                    }
                    for (long k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = h(k, k - 1);
                            q = h(k + 1, k - 1);
                            r = (k != nn - 1) ? h(k + 2, k - 1) : 0.0;
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) h(k, k - 1) = -h(k, k - 1);
                        } else {
                            h(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (long j = k; j <= nn; ++j) {
                            p = h(k, j) + q * h(k + 1, j);
                            if (k != nn - 1) {
                                p += r * h(k + 2, j);
                                h(k + 2, j) -= p * z;
                            }
                            h(k + 1, j) -= p * y;
                            h(k, j) -= p * x;
                        }
                        const long mmin = nn < k + 3 ? nn : k + 3;
                        for (long i = l; i <= mmin; ++i) {
                            p = x * h(i, k) + y * h(i, k + 1);
                            if (k != nn - 1) {
                                p += z * h(i, k + 2);
                                h(i, k + 2) -= p * r;
                            }
                            h(i, k + 1) -= p * q;
                            h(i, k) -= p;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return out;
}

}  // namespace

std::vector<Complex> eigenvalues(const Matrix& a) {
    require_square(a, "eigenvalues");
    require_finite(a, "eigenvalues");
    const std::size_t n = a.rows();
    if (n == 0) return {};
    if (n == 1) return {Complex(a(0, 0), 0.0)};
    Matrix work = a;
    balance_in_place(work);
    hessenberg_in_place(work);
    return hqr_eigenvalues(std::move(work));
}

double spectral_radius(const Matrix& a) {
    double rho = 0.0;
    for (const Complex& lambda : eigenvalues(a)) rho = std::max(rho, std::abs(lambda));
    return rho;
}

bool is_schur(const Matrix& a, double tol) {
    require(tol > 0.0, "is_schur: tol must be positive");
    return spectral_radius(a) < 1.0 - tol;
}

Matrix dare_fixed_point(const Matrix& s, const Matrix& q, double tol,
                        std::size_t max_iter) {
    require_square(s, "dare_fixed_point");
    require_square(q, "dare_fixed_point");
    require(s.rows() == q.rows(), "dare_fixed_point: size mismatch");
    require_finite(s, "dare_fixed_point");
    require_finite(q, "dare_fixed_point");
    const std::size_t n = q.rows();
    require((q - q.transpose()).max_abs() <= 1e-12 * std::max(1.0, q.max_abs()),
            "dare_fixed_point: q must be symmetric");
    {
        SymmetricEigenResult eq = symmetric_eigen(q);
        require(n == 0 || eq.values.front() > 0.0,
                "dare_fixed_point: q must be positive definite");
    }

    const Matrix id = Matrix::identity(n);
    const Matrix st = s.transpose();
    Matrix p = q;
    for (std::size_t it = 0; it < max_iter; ++it) {
        // P+ = S^T P S - S^T P (P+I)^{-1} P S + Q
        const Matrix ps = p * s;
        const Matrix stp = st * p;
        Matrix next = stp * s - stp * solve_square(p + id, ps) + q;
        next = 0.5 * (next + next.transpose());
        const double residual = (next - p).frobenius_norm();
        if (residual <= tol) return p;
        p = std::move(next);
        if (!p.all_finite() || p.frobenius_norm() > 1e12)
            throw std::runtime_error("dare_fixed_point: iteration diverged");
    }
    throw std::runtime_error("dare_fixed_point: iteration cap exceeded without convergence");
}

Matrix complex_embed(const Matrix& re, const Matrix& im) {
    require(re.same_shape(im), "complex_embed: shape mismatch");
    require_square(re, "complex_embed");
    const std::size_t n = re.rows();
    Matrix m(2 * n, 2 * n);
    m.set_block(0, 0, re);
    m.set_block(n, n, re);
    m.set_block(0, n, -im);
    m.set_block(n, 0, im);
    return m;
}

Matrix complex_scale_embed(const Matrix& a, Complex lambda) {
    require_square(a, "complex_scale_embed");
    return complex_embed(lambda.real() * a, lambda.imag() * a);
}

SymmetricEigenResult symmetric_eigen(const Matrix& a) {
    require_square(a, "symmetric_eigen");
    require_finite(a, "symmetric_eigen");
    const std::size_t n = a.rows();
    Matrix d = 0.5 * (a + a.transpose());
    Matrix v = Matrix::identity(n);
    if (n <= 1) return {std::vector<double>(n, n ? d(0, 0) : 0.0), std::move(v)};

    const double norm = d.frobenius_norm();
    const double tol = std::max(norm, 1.0) * kEps * static_cast<double>(n) * 10.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * d(i, j) * d(i, j);
        if (std::sqrt(off) <= tol) break;
        for (std::size_t p = 0; p < n - 1; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(d(p, q)) <= tol / static_cast<double>(n * n)) continue;
                const double theta = (d(q, q) - d(p, p)) / (2.0 * d(p, q));
                const double t = sign_of(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dip = d(i, p), diq = d(i, q);
                    d(i, p) = c * dip - s * diq;
                    d(i, q) = s * dip + c * diq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double dpj = d(p, j), dqj = d(q, j);
                    d(p, j) = c * dpj - s * dqj;
                    d(q, j) = s * dpj + c * dqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return d(i, i) < d(j, j); });
    SymmetricEigenResult res;
    res.values.resize(n);
    res.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        res.values[j] = d(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
    }
    return res;
}

std::vector<double> singular_values(const Matrix& a) {
    // sigma(a) = sqrt(eig(a^T a)), adequate at the accuracy needed here
    const bool wide = a.rows() < a.cols();
    const Matrix g = wide ? a * a.transpose() : a.transpose() * a;
    SymmetricEigenResult e = symmetric_eigen(g);
    std::vector<double> sv(e.values.size());
    for (std::size_t i = 0; i < sv.size(); ++i)
        sv[i] = std::sqrt(std::max(0.0, e.values[sv.size() - 1 - i]));
    return sv;  // descending
}

}  // namespace ddsync
