#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <variant>

#include "ddsync/informativity.hpp"
#include "ddsync/scenario.hpp"
#include "ddsync/synthesis.hpp"
#include "test_util.hpp"

using ddsync::Matrix;
using ddsync::ProtocolGains;
using ddsync::SynthesisDiagnostic;

TEST_CASE("design_state_feedback") {
    SUBCASE("stable plant with a dead input accepts K = 0") {
        auto k = ddsync::design_state_feedback(Matrix{{0.5, 0.1}, {0.0, 0.4}},
                                               Matrix(2, 1));
        REQUIRE(k.has_value());
        CHECK(k->max_abs() <= 1e-12);
    }
    SUBCASE("demo family-1 plant") {
        const Matrix a{{0.0, 1.0}, {1.0, 1.0}};
        const Matrix b{{1.0}, {0.0}};
        auto k = ddsync::design_state_feedback(a, b);
        REQUIRE(k.has_value());
        CHECK(ddsync::spectral_radius(a + b * *k) < 1.0);
    }
    SUBCASE("unstabilizable pair fails") {
        CHECK_FALSE(ddsync::design_state_feedback(Matrix{{2.0}}, Matrix{{0.0}}).has_value());
        CHECK_FALSE(ddsync::design_state_feedback(Matrix{{2.0, 0.0}, {0.0, 0.5}},
                                                  Matrix{{0.0}, {1.0}})
                        .has_value());
    }
}

TEST_CASE("design_f") {
    const ddsync::LeaderSpec leader{Matrix{{0.0, 1.0}, {1.0, 0.0}}, Matrix{{1.0, 0.0}},
                                    Matrix{{1.0}, {1.0}}};
    SUBCASE("single unit eigenvalue") {
        auto f = ddsync::design_f(leader, {ddsync::Complex(1.0, 0.0)});
        REQUIRE(f.has_value());
        CHECK(ddsync::spectral_radius(leader.s - *f) < 1.0);
    }
    SUBCASE("zero coupling eigenvalue is unfixable") {
        CHECK_FALSE(ddsync::design_f(leader, {ddsync::Complex(0.0, 0.0)}).has_value());
    }
    SUBCASE("demo coupling spectrum") {
        auto lambdas = ddsync::coupling_eigenvalues(ddsync::demo_scenario().graph);
        auto f = ddsync::design_f(leader, lambdas);
        REQUIRE(f.has_value());
        for (const auto& lam : lambdas) {
            const Matrix embedded = ddsync::complex_embed(
                leader.s - lam.real() * *f, -lam.imag() * *f);
            CHECK(ddsync::spectral_radius(embedded) < 1.0 - 1e-9);
        }
    }
    SUBCASE("complex coupling eigenvalues from a directed ring") {
        ddsync::CommGraph ring;
        ring.weights = Matrix(3, 3);
        ring.weights(1, 0) = 1.0;
        ring.weights(2, 1) = 1.0;
        ring.weights(0, 2) = 1.0;
        ring.leader_gains = {1.0, 0.0, 0.0};
        auto lambdas = ddsync::coupling_eigenvalues(ring);
        bool saw_complex = false;
        for (const auto& lam : lambdas)
            if (std::abs(lam.imag()) > 1e-6) saw_complex = true;
        CHECK(saw_complex);
        auto f = ddsync::design_f(leader, lambdas);
        REQUIRE(f.has_value());
        for (const auto& lam : lambdas) {
            const Matrix embedded = ddsync::complex_embed(
                leader.s - lam.real() * *f, -lam.imag() * *f);
            CHECK(ddsync::spectral_radius(embedded) < 1.0 - 1e-9);
        }
    }
}

TEST_CASE("synthesize the demo scenario end to end") {
    const auto scenario = ddsync::demo_scenario();
    auto result = ddsync::synthesize(scenario);
    REQUIRE(std::holds_alternative<ProtocolGains>(result));
    const auto& protocol = std::get<ProtocolGains>(result);
    REQUIRE(protocol.followers.size() == 9);
    REQUIRE(protocol.coupling_eigs.size() == 9);

    for (std::size_t i = 0; i < 9; ++i) {
        const auto& gains = protocol.followers[i];
        CHECK(ddsync::verify_k(scenario.followers[i].data, gains.k_gain));
        CHECK(gains.rho < 1.0);
        // regulator equations hold on consistent systems
        ddsync::RegulationCertificate cert;
        cert.pi = gains.pi;
        cert.gamma = gains.gamma;
        auto samples =
            ddsync::sample_consistent_systems(scenario.followers[i].data, 20, 0.5, 5);
        CHECK(ddsync::verify_regulation_on_models(cert, samples, scenario.followers[i].c,
                                                  scenario.followers[i].d,
                                                  scenario.leader, 1e-8));
    }
    for (const auto& lam : protocol.coupling_eigs) {
        const Matrix embedded = ddsync::complex_embed(
            scenario.leader.s - lam.real() * protocol.f, -lam.imag() * protocol.f);
        CHECK(ddsync::spectral_radius(embedded) < 1.0 - 1e-9);
    }

    SUBCASE("synthesis is deterministic") {
        auto again = ddsync::synthesize(scenario);
        const auto& repeat = std::get<ProtocolGains>(again);
        CHECK(testutil::max_abs_diff(repeat.f, protocol.f) == 0.0);
        for (std::size_t i = 0; i < 9; ++i)
            CHECK(testutil::max_abs_diff(repeat.followers[i].k_gain,
                                         protocol.followers[i].k_gain) == 0.0);
    }
}

TEST_CASE("synthesize diagnostics") {
    SUBCASE("truncated data fail the rank gate") {
        auto scenario = ddsync::demo_scenario();
        scenario.followers[0].data.u_minus = Matrix{{1.0}};
        scenario.followers[0].data.x_full = Matrix{{1.0, 0.0}, {-1.0, 0.0}};
        scenario.followers[0].true_model.reset();
        auto result = ddsync::synthesize(scenario);
        REQUIRE(std::holds_alternative<SynthesisDiagnostic>(result));
        const auto& diag = std::get<SynthesisDiagnostic>(result);
        CHECK(diag.code == "stabilization: X- rank");
        CHECK(diag.follower == 0);
    }
    SUBCASE("detached leader") {
        auto scenario = ddsync::demo_scenario();
        scenario.graph.leader_gains.assign(9, 0.0);
        auto result = ddsync::synthesize(scenario);
        REQUIRE(std::holds_alternative<SynthesisDiagnostic>(result));
        CHECK(std::get<SynthesisDiagnostic>(result).code ==
              "graph: leader not connected to a root");
    }
    SUBCASE("leader violating the eigenvalue assumption") {
        auto scenario = ddsync::demo_scenario();
        scenario.leader.s = Matrix::identity(2);
        auto result = ddsync::synthesize(scenario);
        REQUIRE(std::holds_alternative<SynthesisDiagnostic>(result));
        CHECK(std::get<SynthesisDiagnostic>(result).code == "leader: eigenvalue assumption");
    }
    SUBCASE("unsolvable regulation") {
        auto scenario = ddsync::demo_scenario();
        scenario.followers[4].c = Matrix(1, 2);
        scenario.followers[4].d = Matrix(1, 1);
        scenario.followers[4].true_model.reset();
        auto result = ddsync::synthesize(scenario);
        REQUIRE(std::holds_alternative<SynthesisDiagnostic>(result));
        const auto& diag = std::get<SynthesisDiagnostic>(result);
        CHECK(diag.code == "regulation: equations unsolvable");
        CHECK(diag.follower == 4);
    }
}

TEST_CASE("user-supplied F bypasses design but not verification") {
    const auto scenario = ddsync::demo_scenario();
    ddsync::SynthesisOptions options;

    options.f_override = Matrix(2, 2);  // F = 0 leaves S - 0 with radius 1
    auto rejected = ddsync::synthesize(scenario, options);
    REQUIRE(std::holds_alternative<SynthesisDiagnostic>(rejected));
    CHECK(std::get<SynthesisDiagnostic>(rejected).code ==
          "f-design: supplied F fails verification");

    auto designed = std::get<ProtocolGains>(ddsync::synthesize(scenario));
    options.f_override = designed.f;
    auto accepted = ddsync::synthesize(scenario, options);
    REQUIRE(std::holds_alternative<ProtocolGains>(accepted));
    CHECK(testutil::max_abs_diff(std::get<ProtocolGains>(accepted).f, designed.f) == 0.0);
}
