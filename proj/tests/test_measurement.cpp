#include <catch2/catch_amalgamated.hpp>

#include "qumi/measurement.hpp"
#include "qumi/measures.hpp"
#include "qumi/verify.hpp"

using Catch::Approx;
using namespace qumi;
using namespace qumi::measurement;
using linalg::Matrix2;
using linalg::Matrix4;
using states::DensityMatrix2Q;
using states::Direction;

TEST_CASE("projectors", "[measurement]") {
    const Direction e1(1, 0, 0), e3(0, 0, 1);
    SECTION("spin-z outcomes") {
        const Matrix2 up = projector(e3, +1);
        CHECK(up(0, 0).real() == Approx(1.0));
        CHECK(std::abs(up(1, 1)) < 1e-15);
        const Matrix2 down = projector(e3, -1);
        CHECK(down(1, 1).real() == Approx(1.0));
    }
    SECTION("spin-x plus") {
        const Matrix2 p = projector(e1, +1);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(p(i, j).real() == Approx(0.5).margin(1e-15));
    }
    SECTION("idempotent and complete for random directions") {
        verify::Rng rng(41);
        for (int trial = 0; trial < 100; ++trial) {
            const Direction n = verify::random_direction(rng);
            const Matrix2 plus = projector(n, +1), minus = projector(n, -1);
            REQUIRE(linalg::max_abs_diff(plus * plus, plus) < 1e-12);
            REQUIRE(linalg::max_abs_diff(minus * minus, minus) < 1e-12);
            REQUIRE(linalg::max_abs_diff(plus + minus, linalg::identity2()) < 1e-15);
        }
    }
    SECTION("invalid outcome") {
        REQUIRE_THROWS_AS(projector(e3, 0), Error);
    }
}

TEST_CASE("joint probabilities on reference states", "[measurement]") {
    const Direction e3(0, 0, 1);
    SECTION("maximally mixed") {
        const auto t = joint_probabilities(DensityMatrix2Q::validate(0.25 * Matrix4::identity()),
                                           Direction(0, 1, 0), e3);
        for (double p : t.as_array()) CHECK(p == Approx(0.25).margin(1e-15));
    }
    SECTION("singlet along a common axis") {
        const auto t = joint_probabilities(states::werner(1.0), e3, e3);
        CHECK(t.p_pp == Approx(0.0).margin(1e-15));
        CHECK(t.p_pm == Approx(0.5).margin(1e-15));
        CHECK(t.p_mp == Approx(0.5).margin(1e-15));
        CHECK(t.p_mm == Approx(0.0).margin(1e-15));
    }
    SECTION("x-state example") {
        const auto t = joint_probabilities(states::x_state(0, 0, 0.5, 0.3, 0.2), e3, e3);
        CHECK(t.p_pp == Approx(0.5).margin(1e-12));
        CHECK(t.p_pm == Approx(0.15).margin(1e-12));
        CHECK(t.p_mp == Approx(0.1).margin(1e-12));
        CHECK(t.p_mm == Approx(0.25).margin(1e-12));
    }
}

TEST_CASE("projector-trace and pauli routes agree", "[measurement][property]") {
    verify::Rng rng(43);
    for (int trial = 0; trial < 300; ++trial) {
        const DensityMatrix2Q rho = verify::random_state(rng);
        const auto d = states::pauli_decompose(rho);
        const Direction a = verify::random_direction(rng);
        const Direction b = verify::random_direction(rng);
        const auto lhs = joint_probabilities(rho, a, b).as_array();
        const auto rhs = joint_probabilities_from_decomposition(d, a, b).as_array();
        for (int k = 0; k < 4; ++k) REQUIRE(std::abs(lhs[k] - rhs[k]) < 1e-12);
    }
}

TEST_CASE("marginals", "[measurement]") {
    SECTION("uniform") {
        const auto m = marginals(ProbabilityTable2x2{0.25, 0.25, 0.25, 0.25});
        CHECK(m.a[0] == Approx(0.5));
        CHECK(m.b[0] == Approx(0.5));
    }
    SECTION("row and column sums") {
        const auto m = marginals(ProbabilityTable2x2{0.5, 0.15, 0.1, 0.25});
        CHECK(m.a[0] == Approx(0.65).margin(1e-15));
        CHECK(m.a[1] == Approx(0.35).margin(1e-15));
        CHECK(m.b[0] == Approx(0.6).margin(1e-15));
        CHECK(m.b[1] == Approx(0.4).margin(1e-15));
    }
}

TEST_CASE("make_table clipping rules", "[measurement]") {
    const auto t = make_table(0.5, 0.5, -0.5e-12, 0.0);
    CHECK(t.p_mp == 0.0);
    CHECK(t.p_pp + t.p_pm + t.p_mp + t.p_mm == Approx(1.0).margin(1e-15));
    REQUIRE_THROWS_AS(make_table(0.5, 0.5, -1e-9, 0.0), Error);
    REQUIRE_THROWS_AS(make_table(0.4, 0.4, 0.4, 0.4), Error);
}

TEST_CASE("post-measurement state", "[measurement]") {
    const Direction e3(0, 0, 1);
    SECTION("diagonal state is a fixed point") {
        const auto rho = states::x_state(0, 0, 0.5, 0.3, 0.2);  // diagonal in the z basis
        const auto dephased = post_measurement_state(rho, e3, e3);
        CHECK(linalg::max_abs_diff(dephased.matrix(), rho.matrix()) < 1e-12);
    }
    SECTION("maximally mixed is untouched for any axes") {
        verify::Rng rng(47);
        const auto rho = DensityMatrix2Q::validate(0.25 * Matrix4::identity());
        const auto dephased = post_measurement_state(rho, verify::random_direction(rng),
                                                     verify::random_direction(rng));
        CHECK(linalg::max_abs_diff(dephased.matrix(), rho.matrix()) < 1e-12);
    }
    SECTION("singlet dephased along z") {
        const auto dephased = post_measurement_state(states::werner(1.0), e3, e3);
        Matrix4 expected;
        expected(1, 1) = 0.5;
        expected(2, 2) = 0.5;
        CHECK(linalg::max_abs_diff(dephased.matrix(), expected) < 1e-12);
    }
    SECTION("commutes with the measurement projectors") {
        verify::Rng rng(53);
        for (int trial = 0; trial < 50; ++trial) {
            const auto rho = verify::random_state(rng);
            const Direction a = verify::random_direction(rng);
            const Direction b = verify::random_direction(rng);
            const auto dephased = post_measurement_state(rho, a, b);
            for (int mu : {+1, -1})
                for (int nu : {+1, -1}) {
                    const Matrix4 proj = linalg::kron(projector(a, mu), projector(b, nu));
                    REQUIRE(linalg::max_abs_diff(proj * dephased.matrix(),
                                                 dephased.matrix() * proj) < 1e-10);
                }
        }
    }
}

TEST_CASE("conditional states for a measurement on A", "[measurement]") {
    const Direction e3(0, 0, 1);
    SECTION("maximally mixed") {
        const auto ens =
            conditional_states_A(DensityMatrix2Q::validate(0.25 * Matrix4::identity()), e3);
        CHECK(ens.p_plus == Approx(0.5).margin(1e-15));
        CHECK(ens.p_minus == Approx(0.5).margin(1e-15));
        REQUIRE(ens.rho_plus.has_value());
        const Matrix4 expected = linalg::kron(projector(e3, +1), 0.5 * linalg::identity2());
        CHECK(linalg::max_abs_diff(ens.rho_plus->matrix(), expected) < 1e-12);
    }
    SECTION("singlet collapses to anti-correlated products") {
        const auto ens = conditional_states_A(states::werner(1.0), e3);
        CHECK(ens.p_plus == Approx(0.5).margin(1e-15));
        REQUIRE(ens.rho_plus.has_value());
        CHECK(ens.rho_plus->matrix()(1, 1).real() == Approx(1.0).margin(1e-12));
        REQUIRE(ens.rho_minus.has_value());
        CHECK(ens.rho_minus->matrix()(2, 2).real() == Approx(1.0).margin(1e-12));
    }
    SECTION("schmidt state outcome weights") {
        const auto ens =
            conditional_states_A(states::pure_state({std::sqrt(0.8), 0, 0, std::sqrt(0.2)}), e3);
        CHECK(ens.p_plus == Approx(0.8).margin(1e-12));
        CHECK(ens.p_minus == Approx(0.2).margin(1e-12));
    }
    SECTION("degenerate branch is flagged, not divided") {
        const auto ens = conditional_states_A(states::pure_state({1, 0, 0, 0}), e3);
        CHECK(ens.p_minus == Approx(0.0).margin(1e-15));
        CHECK_FALSE(ens.rho_minus.has_value());
        CHECK(ens.rho_plus.has_value());
    }
    SECTION("probabilities match the A marginal for any b") {
        verify::Rng rng(59);
        for (int trial = 0; trial < 100; ++trial) {
            const auto rho = verify::random_state(rng);
            const Direction a = verify::random_direction(rng);
            const Direction b = verify::random_direction(rng);
            const auto ens = conditional_states_A(rho, a);
            const auto m = marginals(joint_probabilities(rho, a, b));
            REQUIRE(ens.p_plus == Approx(m.a[0]).margin(1e-12));
            REQUIRE(ens.p_plus + ens.p_minus == Approx(1.0).margin(1e-10));
            // mixture reassembles the A-dephased state
            Matrix4 mixture;
            if (ens.rho_plus) mixture = mixture + ens.p_plus * ens.rho_plus->matrix();
            if (ens.rho_minus) mixture = mixture + ens.p_minus * ens.rho_minus->matrix();
            const auto dephased = dephase_a(rho, projector(a, +1), projector(a, -1));
            REQUIRE(linalg::max_abs_diff(mixture, dephased.matrix()) < 1e-10);
        }
    }
}

TEST_CASE("antipodal flip permutes outcomes and preserves information", "[measurement][property]") {
    verify::Rng rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rho = verify::random_state(rng);
        const Direction a = verify::random_direction(rng);
        const Direction b = verify::random_direction(rng);
        const auto t = joint_probabilities(rho, a, b);
        const auto f = joint_probabilities(rho, -a, b);
        REQUIRE(f.p_pp == Approx(t.p_mp).margin(1e-12));
        REQUIRE(f.p_pm == Approx(t.p_mm).margin(1e-12));
        REQUIRE(f.p_mp == Approx(t.p_pp).margin(1e-12));
        REQUIRE(f.p_mm == Approx(t.p_pm).margin(1e-12));
        REQUIRE(measures::table_mutual_information(f) ==
                Approx(measures::table_mutual_information(t)).margin(1e-12));
    }
}

TEST_CASE("probability tables are covariant under joint rotations", "[measurement][property]") {
    verify::Rng rng(67);
    for (int trial = 0; trial < 150; ++trial) {
        const auto rho = verify::random_state(rng);
        const Direction a = verify::random_direction(rng);
        const Direction b = verify::random_direction(rng);
        const Matrix2 u = verify::random_unitary2(rng);
        const auto r = verify::rotation_of_unitary(u);
        const auto rotated = verify::apply_local_unitaries(rho, u, u);
        const auto before = joint_probabilities(rho, a, b).as_array();
        const auto after =
            joint_probabilities(rotated, verify::rotate(r, a), verify::rotate(r, b)).as_array();
        for (int k = 0; k < 4; ++k) REQUIRE(std::abs(before[k] - after[k]) < 1e-10);
    }
}

TEST_CASE("dephasing identity: quantum information of the dephased state",
          "[measurement][property]") {
    verify::Rng rng(71);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rho = verify::random_state(rng);
        const Direction a = verify::random_direction(rng);
        const Direction b = verify::random_direction(rng);
        const double classical = measures::classical_mutual_information(rho, a, b);
        const double quantum =
            measures::quantum_mutual_information(post_measurement_state(rho, a, b));
        REQUIRE(std::abs(classical - quantum) < 1e-9);
    }
}
