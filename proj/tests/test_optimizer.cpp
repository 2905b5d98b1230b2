#include <catch2/catch_amalgamated.hpp>

#include "qumi/measures.hpp"
#include "qumi/optimizer.hpp"
#include "qumi/verify.hpp"

using Catch::Approx;
using namespace qumi;
using namespace qumi::optimizer;
using states::Direction;

namespace {

SearchConfig small_config() {
    SearchConfig cfg;
    cfg.grid_polar = 16;
    cfg.grid_azimuthal = 32;
    return cfg;
}

} // namespace

TEST_CASE("config validation", "[optimizer]") {
    SearchConfig cfg;
    cfg.grid_polar = 2;
    REQUIRE_THROWS_AS(cfg.check(), Error);
    cfg = SearchConfig{};
    cfg.refine_tolerance = 0.0;
    REQUIRE_THROWS_AS(cfg.check(), Error);
    REQUIRE_NOTHROW(SearchConfig{}.check());
}

TEST_CASE("one-direction search on simple objectives", "[optimizer]") {
    SECTION("linear objective peaks at the pole") {
        const auto res = extremize_one_direction([](const Direction& n) { return n.z; },
                                                 Mode::Maximize, small_config());
        CHECK(states::axis_angle(res.direction, Direction(0, 0, 1)) < 1e-5);
        CHECK(res.value == Approx(1.0).margin(1e-9));
    }
    SECTION("constant objective returns the first grid point") {
        const auto res = extremize_one_direction([](const Direction&) { return 0.125; },
                                                 Mode::Maximize, small_config());
        // grid index 0 is theta = 0, phi = 0: the +z pole
        CHECK(res.direction.z == 1.0);
        CHECK(res.value == 0.125);
    }
    SECTION("classical information of the singlet with b fixed") {
        const auto d = states::pauli_decompose(states::werner(1.0));
        const Direction e3(0, 0, 1);
        const auto res = extremize_one_direction(
            [&](const Direction& a) { return measures::classical_mutual_information(d, a, e3); },
            Mode::Maximize, small_config());
        CHECK(res.value == Approx(1.0).margin(1e-6));
        CHECK(states::axis_angle(res.direction, e3) < 1e-3);
    }
    SECTION("minimization mode") {
        const auto res = extremize_one_direction([](const Direction& n) { return n.z * n.z; },
                                                 Mode::Minimize, small_config());
        CHECK(res.value == Approx(0.0).margin(1e-9));
    }
    SECTION("antipodally symmetric objectives make the hemisphere restriction lossless") {
        // spot check for the objective family the searches are used with
        verify::Rng rng(89);
        const auto rho = verify::random_state(rng);
        const auto d = states::pauli_decompose(rho);
        const Direction n = verify::random_direction(rng);
        const Direction b = verify::random_direction(rng);
        CHECK(measures::classical_mutual_information(d, n, b) ==
              Approx(measures::classical_mutual_information(d, -n, b)).margin(1e-12));
        CHECK(measures::conditional_entropy_A(rho, n) ==
              Approx(measures::conditional_entropy_A(rho, -n)).margin(1e-12));
    }
}

TEST_CASE("one-direction optimum matches the analytic direction", "[optimizer][property]") {
    // For a state with vanishing A Bloch vector the A marginal is uniform and
    // I(a, b) grows monotonically with |a . C b|, so the maximizer is C b
    // normalized. Verified against the search on random Bell-diagonal states.
    verify::Rng rng(73);
    for (int trial = 0; trial < 25; ++trial) {
        const auto f = verify::random_bell_diagonal_f(rng);
        const auto d = states::pauli_decompose(states::bell_diagonal(f[0], f[1], f[2]));
        const Direction b = verify::random_direction(rng);
        const auto cb = linalg::multiply(d.corr, b.as_array());
        if (states::norm3(cb) < 1e-3) continue;
        const Direction analytic = Direction::normalized(cb);
        const auto res = extremize_one_direction(
            [&](const Direction& a) { return measures::classical_mutual_information(d, a, b); },
            Mode::Maximize, small_config());
        REQUIRE(res.value ==
                Approx(measures::classical_mutual_information(d, analytic, b)).margin(1e-6));
    }
}

TEST_CASE("two-direction search", "[optimizer]") {
    SECTION("singlet reaches one bit") {
        const auto d = states::pauli_decompose(states::werner(1.0));
        const auto res = extremize_two_directions(
            [&](const Direction& a, const Direction& b) {
                return measures::classical_mutual_information(d, a, b);
            },
            Mode::Maximize, small_config());
        CHECK(res.value == Approx(1.0).margin(1e-6));
    }
    SECTION("maximally mixed gives zero") {
        const auto d = states::pauli_decompose(
            states::DensityMatrix2Q::validate(0.25 * linalg::Matrix4::identity()));
        const auto res = extremize_two_directions(
            [&](const Direction& a, const Direction& b) {
                return measures::classical_mutual_information(d, a, b);
            },
            Mode::Maximize, small_config());
        CHECK(res.value == Approx(0.0).margin(1e-9));
    }
    SECTION("dominant axis of a bell-diagonal state") {
        const auto d = states::pauli_decompose(states::bell_diagonal(0.6, 0.2, 0.1));
        const auto res = extremize_two_directions(
            [&](const Direction& a, const Direction& b) {
                return measures::classical_mutual_information(d, a, b);
            },
            Mode::Maximize, small_config());
        const double expected = measures::classical_capacity_closed_form(0.6);
        CHECK(res.value == Approx(expected).margin(1e-4));
        CHECK(states::axis_angle(res.a, Direction(1, 0, 0)) < 1e-2);
        CHECK(states::axis_angle(res.b, Direction(1, 0, 0)) < 1e-2);
    }
}

TEST_CASE("closed-form soundness over random bell-diagonal states", "[optimizer][property]") {
    verify::Rng rng(79);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = verify::random_bell_diagonal_f(rng);
        const auto d = states::pauli_decompose(states::bell_diagonal(f[0], f[1], f[2]));
        const double closed = measures::classical_capacity_closed_form(
            std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])}));
        const auto res = extremize_two_directions(
            [&](const Direction& a, const Direction& b) {
                return measures::classical_mutual_information(d, a, b);
            },
            Mode::Maximize, small_config());
        worst = std::max(worst, std::abs(closed - res.value));
    }
    REQUIRE(worst < 1e-4);
}

TEST_CASE("determinism", "[optimizer]") {
    const auto d = states::pauli_decompose(states::bell_diagonal(0.45, -0.3, 0.2));
    auto objective = [&](const Direction& a, const Direction& b) {
        return measures::classical_mutual_information(d, a, b);
    };
    const auto first = extremize_two_directions(objective, Mode::Maximize, small_config());
    const auto second = extremize_two_directions(objective, Mode::Maximize, small_config());
    CHECK(first.value == second.value);
    CHECK(first.a.x == second.a.x);
    CHECK(first.a.y == second.a.y);
    CHECK(first.a.z == second.a.z);
    CHECK(first.b.x == second.b.x);
    CHECK(first.b.y == second.b.y);
    CHECK(first.b.z == second.b.z);
}

TEST_CASE("refinement never backslides", "[optimizer][property]") {
    verify::Rng rng(83);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rho = verify::random_state(rng);
        const auto d = states::pauli_decompose(rho);
        const Direction b = verify::random_direction(rng);
        const auto max_run = extremize_one_direction(
            [&](const Direction& a) { return measures::classical_mutual_information(d, a, b); },
            Mode::Maximize, small_config());
        for (std::size_t k = 1; k < max_run.refinement_trace.size(); ++k)
            REQUIRE(max_run.refinement_trace[k] >= max_run.refinement_trace[k - 1]);

        const auto min_run = extremize_one_direction(
            [&](const Direction& a) { return measures::conditional_entropy_A(rho, a); },
            Mode::Minimize, small_config());
        for (std::size_t k = 1; k < min_run.refinement_trace.size(); ++k)
            REQUIRE(min_run.refinement_trace[k] <= min_run.refinement_trace[k - 1]);
    }
}
