#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ddsync/matcore.hpp"
#include "test_util.hpp"

using ddsync::Complex;
using ddsync::Matrix;
using testutil::Rand;
using testutil::random_matrix;

namespace {

// Sort eigenvalues for comparison: by real part, then imaginary part.
std::vector<Complex> sorted_eigs(std::vector<Complex> v) {
    std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

}  // namespace

TEST_CASE("kron identity cases") {
    Matrix b = {{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
    Matrix one = {{1.0}};
    CHECK(testutil::max_abs_diff(kron(one, b), b) == 0.0);

    Matrix i4 = kron(Matrix::identity(2), Matrix::identity(2));
    CHECK(testutil::max_abs_diff(i4, Matrix::identity(4)) == 0.0);
}

TEST_CASE("kron against brute-force index oracle") {
    Matrix a = {{1.0, 2.0}, {3.0, 4.0}};
    Matrix b = {{0.0, 1.0}, {1.0, 0.0}};
    Matrix k = kron(a, b);
    REQUIRE(k.rows() == 4);
    REQUIRE(k.cols() == 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t p = 0; p < 2; ++p)
                for (std::size_t q = 0; q < 2; ++q)
                    CHECK(k(i * 2 + p, j * 2 + q) == a(i, j) * b(p, q));
}

TEST_CASE("vec/kron identity vec(AXB) = (B^T kron A) vec(X)") {
    Rand rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix a = random_matrix(rng, 3, 4);
        Matrix x = random_matrix(rng, 4, 2);
        Matrix b = random_matrix(rng, 2, 5);
        Matrix lhs = ddsync::vec(a * x * b);
        Matrix rhs = kron(b.transpose(), a) * ddsync::vec(x);
        CHECK(testutil::max_abs_diff(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("lstsq_min_norm simple cases") {
    SUBCASE("identity") {
        Matrix b = {{3.0, 1.0}, {-2.0, 5.0}};
        auto [x, res] = lstsq_min_norm(Matrix::identity(2), b);
        CHECK(testutil::max_abs_diff(x, b) <= 1e-14);
        CHECK(res <= 1e-14);
    }
    SUBCASE("rank deficient with residual") {
        Matrix a = {{1.0, 0.0}, {0.0, 0.0}};
        Matrix b = {{1.0}, {1.0}};
        auto [x, res] = lstsq_min_norm(a, b);
        CHECK(std::abs(x(0, 0) - 1.0) <= 1e-14);
        CHECK(std::abs(x(1, 0)) <= 1e-14);
        CHECK(res == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("underdetermined min-norm") {
        Matrix a = {{1.0, 1.0}};
        Matrix b = {{2.0}};
        auto [x, res] = lstsq_min_norm(a, b);
        CHECK(std::abs(x(0, 0) - 1.0) <= 1e-12);
        CHECK(std::abs(x(1, 0) - 1.0) <= 1e-12);
        CHECK(res <= 1e-12);
    }
}

TEST_CASE("lstsq_min_norm satisfies normal equations and kernel orthogonality") {
    Rand rng(202);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 2 + trial % 5;
        const std::size_t n = 2 + (trial * 7) % 5;
        Matrix a = random_matrix(rng, m, n);
        if (trial % 3 == 0 && n >= 2) {
            // force rank deficiency: duplicate a column
            for (std::size_t i = 0; i < m; ++i) a(i, n - 1) = a(i, 0);
        }
        Matrix b = random_matrix(rng, m, 2);
        auto [x, res] = lstsq_min_norm(a, b);
        Matrix normal = a.transpose() * (a * x - b);
        CHECK(normal.max_abs() <= 1e-10);
        Matrix null = ddsync::kernel_basis(a);
        if (null.cols() > 0) {
            Matrix proj = null.transpose() * x;
            CHECK(proj.max_abs() <= 1e-10);
        }
        CHECK(std::abs((a * x - b).frobenius_norm() - res) <= 1e-10);
    }
}

TEST_CASE("kernel_basis columns are orthonormal and annihilated") {
    Rand rng(303);
    Matrix a = random_matrix(rng, 2, 5);
    Matrix k = ddsync::kernel_basis(a);
    REQUIRE(k.cols() == 3);
    CHECK((a * k).max_abs() <= 1e-12);
    Matrix gram = k.transpose() * k;
    CHECK(testutil::max_abs_diff(gram, Matrix::identity(3)) <= 1e-12);
}

TEST_CASE("eigenvalues of simple matrices") {
    auto e1 = sorted_eigs(ddsync::eigenvalues(Matrix::identity(3)));
    for (const auto& lam : e1) {
        CHECK(lam.real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(lam.imag() == 0.0);
    }

    auto e2 = sorted_eigs(ddsync::eigenvalues(Matrix{{0.0, 1.0}, {1.0, 0.0}}));
    CHECK(e2[0].real() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(e2[1].real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigenvalues of a 2x2 closed-loop matrix match the characteristic polynomial") {
    Matrix a = {{-0.3677, -0.3560}, {1.0, 1.0}};
    auto oracle = testutil::eig2x2_oracle(a);
    auto eigs = sorted_eigs(ddsync::eigenvalues(a));
    CHECK(eigs[1].real() == doctest::Approx(oracle.first.real()).epsilon(1e-9));
    CHECK(eigs[0].real() == doctest::Approx(oracle.second.real()).epsilon(1e-9));
    CHECK(eigs[1].real() == doctest::Approx(0.6503).epsilon(1e-3));
    CHECK(eigs[0].real() == doctest::Approx(-0.0180).epsilon(2e-2));
    CHECK(ddsync::spectral_radius(a) == doctest::Approx(std::abs(oracle.first)).epsilon(1e-10));
}

TEST_CASE("eigenvalue product equals determinant on random 5x5 matrices") {
    Rand rng(404);
    for (int trial = 0; trial < 25; ++trial) {
        Matrix a = random_matrix(rng, 5, 5);
        Complex prod(1.0, 0.0);
        for (const Complex& lam : ddsync::eigenvalues(a)) prod *= lam;
        const double det = ddsync::determinant(a);
        const double scale = std::max(1e-30, std::abs(det));
        CHECK(std::abs(prod.real() - det) / scale <= 1e-8);
        CHECK(std::abs(prod.imag()) / scale <= 1e-8);
    }
}

TEST_CASE("eigenvalues handles larger symmetric-free spectra") {
    // companion matrix of (x-1)(x-2)(x-3)(x-4) = x^4 -10x^3 +35x^2 -50x +24
    Matrix c = {{10.0, -35.0, 50.0, -24.0},
                {1.0, 0.0, 0.0, 0.0},
                {0.0, 1.0, 0.0, 0.0},
                {0.0, 0.0, 1.0, 0.0}};
    auto eigs = sorted_eigs(ddsync::eigenvalues(c));
    for (int i = 0; i < 4; ++i) {
        CHECK(eigs[i].real() == doctest::Approx(i + 1.0).epsilon(1e-9));
        CHECK(std::abs(eigs[i].imag()) <= 1e-9);
    }
}

TEST_CASE("spectral_radius basics") {
    CHECK(ddsync::spectral_radius(Matrix(3, 3)) == 0.0);
    CHECK(ddsync::spectral_radius(Matrix{{0.0, 1.0}, {1.0, 0.0}}) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("is_schur") {
    CHECK(ddsync::is_schur(0.5 * Matrix::identity(2), 1e-9));
    CHECK_FALSE(ddsync::is_schur(Matrix::identity(2), 1e-9));
    CHECK(ddsync::is_schur(Matrix{{-0.3677, -0.3560}, {1.0, 1.0}}, 1e-9));
    CHECK_THROWS_AS(ddsync::is_schur(Matrix{{1.0, 2.0}}, 1e-9), std::invalid_argument);
}

TEST_CASE("dare_fixed_point scalar and matrix cases") {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;

    SUBCASE("S = 0 gives P = Q") {
        Matrix p = ddsync::dare_fixed_point(Matrix{{0.0}}, Matrix{{1.0}});
        CHECK(p(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("scalar golden ratio") {
        Matrix p = ddsync::dare_fixed_point(Matrix{{1.0}}, Matrix{{1.0}});
        CHECK(p(0, 0) == doctest::Approx(golden).epsilon(1e-11));
    }
    SUBCASE("permutation S reduces to scalar case") {
        Matrix s = {{0.0, 1.0}, {1.0, 0.0}};
        Matrix p = ddsync::dare_fixed_point(s, Matrix::identity(2));
        CHECK(p(0, 0) == doctest::Approx(golden).epsilon(1e-11));
        CHECK(p(1, 1) == doctest::Approx(golden).epsilon(1e-11));
        CHECK(std::abs(p(0, 1)) <= 1e-11);
    }
    SUBCASE("residual bound holds as stated") {
        Matrix s = {{0.0, 1.0}, {1.0, 0.0}};
        Matrix q = {{2.0, 0.5}, {0.5, 1.0}};
        Matrix p = ddsync::dare_fixed_point(s, q, 1e-12);
        Matrix id = Matrix::identity(2);
        Matrix f = s.transpose() * p * s -
                   s.transpose() * p * ddsync::solve_square(p + id, p * s) + q;
        CHECK((p - f).frobenius_norm() <= 1e-12);
    }
    SUBCASE("iteration cap reports failure") {
        CHECK_THROWS_AS(ddsync::dare_fixed_point(Matrix{{1.0}}, Matrix{{1.0}}, 1e-12, 3),
                        std::runtime_error);
    }
    SUBCASE("rejects indefinite q") {
        CHECK_THROWS_AS(ddsync::dare_fixed_point(Matrix{{1.0}}, Matrix{{-1.0}}),
                        std::invalid_argument);
    }
}

TEST_CASE("complex_scale_embed") {
    SUBCASE("lambda = 1 doubles the spectrum") {
        Matrix a = {{0.3, 1.0}, {0.0, -0.2}};
        auto base = sorted_eigs(ddsync::eigenvalues(a));
        auto emb = sorted_eigs(ddsync::eigenvalues(ddsync::complex_scale_embed(a, {1.0, 0.0})));
        REQUIRE(emb.size() == 4);
        CHECK(emb[0].real() == doctest::Approx(base[0].real()).epsilon(1e-12));
        CHECK(emb[3].real() == doctest::Approx(base[1].real()).epsilon(1e-12));
    }
    SUBCASE("lambda = i on 1x1 identity is a rotation") {
        Matrix e = ddsync::complex_scale_embed(Matrix{{1.0}}, {0.0, 1.0});
        CHECK(e(0, 0) == 0.0);
        CHECK(e(0, 1) == -1.0);
        CHECK(e(1, 0) == 1.0);
        CHECK(e(1, 1) == 0.0);
        CHECK(ddsync::spectral_radius(e) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("modulus scaling on the swap matrix") {
        Matrix a = {{0.0, 1.0}, {1.0, 0.0}};
        const double rho = ddsync::spectral_radius(ddsync::complex_scale_embed(a, {0.5, 0.5}));
        CHECK(rho == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
    }
    SUBCASE("radius identity on random matrices") {
        Rand rng(505);
        for (int trial = 0; trial < 15; ++trial) {
            Matrix a = random_matrix(rng, 3, 3);
            const Complex lambda(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
            const double lhs = ddsync::spectral_radius(ddsync::complex_scale_embed(a, lambda));
            const double rhs = std::abs(lambda) * ddsync::spectral_radius(a);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, rhs));
        }
    }
}

TEST_CASE("symmetric_eigen and singular_values") {
    Matrix a = {{2.0, 1.0}, {1.0, 2.0}};
    auto e = ddsync::symmetric_eigen(a);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-12));
    Matrix recon = e.vectors * Matrix::diagonal(e.values) * e.vectors.transpose();
    CHECK(testutil::max_abs_diff(recon, a) <= 1e-12);

    Matrix r = {{3.0, 0.0}, {0.0, 0.0}};
    auto sv = ddsync::singular_values(r);
    CHECK(sv[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(sv[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("solve_square and determinant") {
    Matrix a = {{2.0, 1.0, 0.0}, {1.0, 3.0, 1.0}, {0.0, 1.0, 2.0}};
    Matrix b = {{1.0}, {0.0}, {-1.0}};
    Matrix x = ddsync::solve_square(a, b);
    CHECK((a * x - b).max_abs() <= 1e-12);
    CHECK(ddsync::determinant(Matrix{{1.0, 2.0}, {3.0, 4.0}}) ==
          doctest::Approx(-2.0).epsilon(1e-12));
    CHECK_THROWS_AS(ddsync::solve_square(Matrix{{1.0, 1.0}, {1.0, 1.0}}, b.block(0, 0, 2, 1)),
                    std::runtime_error);
}

TEST_CASE("empty and zero-dimension operands") {
    Matrix empty_rows(0, 3);
    Matrix tall(3, 2);
    CHECK((empty_rows * tall).rows() == 0);
    CHECK(ddsync::eigenvalues(Matrix(0, 0)).empty());
    Matrix k = ddsync::kernel_basis(empty_rows);
    CHECK(k.cols() == 3);
    CHECK(ddsync::rank(empty_rows) == 0);
}

TEST_CASE("non-finite input is rejected") {
    Matrix a = Matrix::identity(2);
    a(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(a.all_finite());
    CHECK_THROWS_AS(ddsync::eigenvalues(a), std::invalid_argument);
    CHECK_THROWS_AS(ddsync::lstsq_min_norm(a, Matrix::identity(2)), std::invalid_argument);
}
