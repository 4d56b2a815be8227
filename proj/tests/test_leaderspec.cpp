#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddsync/leaderspec.hpp"
#include "test_util.hpp"

using ddsync::LeaderSpec;
using ddsync::Matrix;

namespace {

LeaderSpec demo_leader() {
    return {Matrix{{0.0, 1.0}, {1.0, 0.0}}, Matrix{{1.0, 0.0}}, Matrix{{1.0}, {1.0}}};
}

}  // namespace

TEST_CASE("eigenvalue assumption on S") {
    SUBCASE("swap matrix passes") {
        auto report = ddsync::check_assumption_s(demo_leader());
        CHECK(report.holds);
        CHECK(report.max_modulus_error <= 1e-12);
        CHECK(report.min_gap == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("identity fails simplicity") {
        LeaderSpec leader{Matrix::identity(2), Matrix{{1.0, 0.0}}, Matrix{{1.0}, {1.0}}};
        auto report = ddsync::check_assumption_s(leader);
        CHECK(report.unit_circle);
        CHECK_FALSE(report.simple);
        CHECK_FALSE(report.holds);
    }
    SUBCASE("contraction fails the unit circle") {
        LeaderSpec leader{Matrix{{0.5}}, Matrix{{1.0}}, Matrix{{1.0}}};
        auto report = ddsync::check_assumption_s(leader);
        CHECK_FALSE(report.unit_circle);
        CHECK_FALSE(report.holds);
    }
    SUBCASE("rotation passes") {
        const double a = 1.0;  // radians
        LeaderSpec leader{Matrix{{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}},
                          Matrix{{1.0, 0.0}}, Matrix{{1.0}, {0.0}}};
        CHECK(ddsync::check_assumption_s(leader).holds);
    }
}

TEST_CASE("observability of (R, S)") {
    CHECK(ddsync::check_observability(demo_leader()));

    LeaderSpec blind{Matrix{{0.0, 1.0}, {1.0, 0.0}}, Matrix{{0.0, 0.0}},
                     Matrix{{1.0}, {1.0}}};
    CHECK_FALSE(ddsync::check_observability(blind));

    LeaderSpec repeated{Matrix::identity(2), Matrix{{1.0, 1.0}}, Matrix{{1.0}, {1.0}}};
    CHECK_FALSE(ddsync::check_observability(repeated));
}

TEST_CASE("leader trajectory") {
    SUBCASE("demo leader holds a constant output of one") {
        auto traj = ddsync::leader_trajectory(demo_leader(), 20);
        for (std::size_t k = 0; k <= 20; ++k)
            CHECK(traj.outputs(0, k) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("zero start stays zero") {
        LeaderSpec leader = demo_leader();
        leader.x0 = Matrix(2, 1);
        auto traj = ddsync::leader_trajectory(leader, 5);
        CHECK(traj.states.max_abs() == 0.0);
        CHECK(traj.outputs.max_abs() == 0.0);
    }
    SUBCASE("swap dynamics alternate the state") {
        LeaderSpec leader = demo_leader();
        leader.x0 = Matrix{{1.0}, {0.0}};
        auto traj = ddsync::leader_trajectory(leader, 4);
        CHECK(traj.states(0, 0) == 1.0);
        CHECK(traj.states(1, 1) == 1.0);
        CHECK(traj.states(0, 2) == 1.0);
        CHECK(traj.states(1, 2) == 0.0);
    }
}

TEST_CASE("validated leaders are power bounded") {
    // simple unit-circle spectra keep ||S^k|| bounded; check growth of the
    // max column norm over ten thousand steps
    const auto max_col_norm = [](const Matrix& m) {
        double worst = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, j) * m(i, j);
            worst = std::max(worst, std::sqrt(s));
        }
        return worst;
    };
    const double a = 0.7;
    for (const Matrix& s :
         {Matrix{{0.0, 1.0}, {1.0, 0.0}},
          Matrix{{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}}}) {
        LeaderSpec leader{s, Matrix{{1.0, 0.0}}, Matrix{{1.0}, {1.0}}};
        REQUIRE(ddsync::check_assumption_s(leader).holds);
        Matrix power = Matrix::identity(2);
        const double initial = max_col_norm(s);
        double worst = 0.0;
        for (int k = 0; k < 10000; ++k) {
            power = power * s;
            worst = std::max(worst, max_col_norm(power));
        }
        CHECK(worst <= 10.0 * initial);
    }
}

TEST_CASE("leader validation") {
    LeaderSpec bad = demo_leader();
    bad.r_out = Matrix{{1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(ddsync::validate_leader(bad), std::invalid_argument);
    bad = demo_leader();
    bad.x0 = Matrix{{1.0}};
    CHECK_THROWS_AS(ddsync::validate_leader(bad), std::invalid_argument);
}
