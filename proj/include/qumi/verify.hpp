#pragma once

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qumi/linalg.hpp"
#include "qumi/measurement.hpp"
#include "qumi/measures.hpp"
#include "qumi/optimizer.hpp"
#include "qumi/states.hpp"

// Randomized self-verification suites: every structural invariant of the
// library, each reported with its sample count, worst observed deviation and
// tolerance. Shared by `qumi verify` and the acceptance tests. All sampling
// is seeded, so results are reproducible run to run.
namespace qumi::verify {

using linalg::Complex;
using linalg::Matrix2;
using linalg::Matrix4;
using linalg::RealMatrix3;
using measures::SearchConfig;
using states::DensityMatrix2Q;
using states::Direction;
using states::PauliDecomposition;

using Rng = std::mt19937_64;

// ---------------------------------------------------------------------------
// Samplers

inline Direction random_direction(Rng& rng) {
    std::normal_distribution<double> g;
    while (true) {
        const double x = g(rng), y = g(rng), z = g(rng);
        if (x * x + y * y + z * z > 1e-12) return Direction::normalized(x, y, z);
    }
}

inline Matrix4 random_ginibre4(Rng& rng) {
    std::normal_distribution<double> g;
    Matrix4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

inline Matrix2 random_ginibre2(Rng& rng) {
    std::normal_distribution<double> g;
    Matrix2 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

/// Full-rank random state G G^dagger / Tr(G G^dagger).
inline DensityMatrix2Q random_state(Rng& rng) {
    const Matrix4 g = random_ginibre4(rng);
    const Matrix4 gg = g * g.adjoint();
    return DensityMatrix2Q::validate((1.0 / gg.trace().real()) * gg);
}

inline DensityMatrix2Q random_state_min_bloch(Rng& rng, double min_norm) {
    while (true) {
        DensityMatrix2Q rho = random_state(rng);
        const auto d = states::pauli_decompose(rho);
        if (states::norm3(d.bloch_a) > min_norm && states::norm3(d.bloch_b) > min_norm) return rho;
    }
}

inline Matrix2 random_qubit_density(Rng& rng, double min_bloch = 0.0) {
    while (true) {
        const Matrix2 g = random_ginibre2(rng);
        const Matrix2 gg = g * g.adjoint();
        const Matrix2 rho = (1.0 / gg.trace().real()) * gg;
        if (states::norm3(states::bloch_vector(rho)) >= min_bloch) return rho;
    }
}

inline DensityMatrix2Q random_product_state(Rng& rng, double min_bloch = 0.05) {
    return DensityMatrix2Q::validate(
        linalg::kron(random_qubit_density(rng, min_bloch), random_qubit_density(rng, min_bloch)));
}

/// Uniform draw from the Bell-diagonal tetrahedron.
inline std::array<double, 3> random_bell_diagonal_f(Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        const std::array<double, 3> f{u(rng), u(rng), u(rng)};
        const auto lambdas = states::bell_diagonal_eigenvalues(f[0], f[1], f[2]);
        if (*std::min_element(lambdas.begin(), lambdas.end()) >= 0.0) return f;
    }
}

/// Haar-ish random SU(2): rotation by a uniform angle about a random axis.
inline Matrix2 random_unitary2(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * 3.14159265358979323846);
    const Direction axis = random_direction(rng);
    const double half = 0.5 * u(rng);
    const Matrix2 generator = measurement::spin_component(axis);  // axis.sigma/2
    // U = cos(t/2) I - 2 i sin(t/2) (axis.sigma/2)
    return std::cos(half) * linalg::identity2() +
           Complex(0.0, -2.0 * std::sin(half)) * generator;
}

/// SO(3) image of a qubit unitary: U (n.sigma) U^dagger = (R n).sigma.
inline RealMatrix3 rotation_of_unitary(const Matrix2& u) {
    RealMatrix3 r;
    const Matrix2 udag = u.adjoint();
    for (int j = 0; j < 3; ++j) {
        const Matrix2 conj = u * linalg::pauli(j) * udag;
        for (int i = 0; i < 3; ++i)
            r(i, j) = 0.5 * linalg::trace_product(linalg::pauli(i), conj).real();
    }
    return r;
}

inline Direction rotate(const RealMatrix3& r, const Direction& n) {
    return Direction::normalized(linalg::multiply(r, n.as_array()));
}

inline DensityMatrix2Q apply_local_unitaries(const DensityMatrix2Q& rho, const Matrix2& ua,
                                             const Matrix2& ub) {
    const Matrix4 u = linalg::kron(ua, ub);
    return DensityMatrix2Q::validate(u * rho.matrix() * u.adjoint());
}

/// Random pure state with Schmidt weights (q, 1-q), q in (0.5, 1), in a
/// random local frame.
inline DensityMatrix2Q random_schmidt_pure(Rng& rng, double& q_out) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double q;
    do {
        q = 0.5 + 0.5 * u(rng);
    } while (q - 0.5 < 1e-6 || 1.0 - q < 1e-6);
    q_out = q;
    const std::array<Complex, 4> schmidt{std::sqrt(q), 0.0, 0.0, std::sqrt(1.0 - q)};
    const Matrix4 local = linalg::kron(random_unitary2(rng), random_unitary2(rng));
    std::array<Complex, 4> amplitudes{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) amplitudes[i] += local(i, j) * schmidt[j];
    return states::pure_state(amplitudes);
}

/// X-state with r = 0, s in [0.1, 0.5], |c1| >= |c2| and c1^2 <= c3^2; the
/// regime in which the optimal discord measurement is along e3.
inline states::XStateParams random_xstate_for_discord(Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (true) {
        const double c3 = (u(rng) < 0.5 ? -1.0 : 1.0) * (0.4 + 0.55 * u(rng));
        const double c1 = std::abs(c3) * (2.0 * u(rng) - 1.0);
        const double c2 = std::abs(c1) * (2.0 * u(rng) - 1.0);
        const double s = 0.1 + 0.4 * u(rng);
        const states::XStateParams params{c1, c2, c3, 0.0, s};
        try {
            states::x_state(params.c1, params.c2, params.c3, params.r, params.s);
        } catch (const Error&) {
            continue;
        }
        return params;
    }
}

// ---------------------------------------------------------------------------
// Suite plumbing

struct SuiteResult {
    std::string name;
    int checks = 0;
    double worst = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::string detail;
};

inline SuiteResult finish(std::string name, double tolerance, int checks, double worst,
                          std::string detail = "") {
    SuiteResult r;
    r.name = std::move(name);
    r.checks = checks;
    r.worst = worst;
    r.tolerance = tolerance;
    r.pass = worst <= tolerance;
    r.detail = std::move(detail);
    return r;
}

struct VerifyOptions {
    SearchConfig search{};
    int n_linalg = 200;
    int n_roundtrip = 1000;
    int n_variance = 200;
    int n_identity = 1000;
    int n_two_path = 1000;
    int n_covariance = 200;
    int n_nonneg = 1000;
    int n_case1 = 200;
    int n_closed_form = 200;
    int n_mid = 200;
    int n_bell_sym = 200;
    int n_xstate = 50;
    int n_pure = 50;
    int n_product = 100;
    int n_lu_direct = 50;
    int n_lu_optimized = 8;
    int n_determinism = 5;
};

inline VerifyOptions full_options() { return {}; }

inline VerifyOptions quick_options() {
    VerifyOptions o;
    o.search.grid_polar = 16;
    o.search.grid_azimuthal = 32;
    o.n_linalg = 50;
    o.n_roundtrip = 50;
    o.n_variance = 50;
    o.n_identity = 50;
    o.n_two_path = 50;
    o.n_covariance = 50;
    o.n_nonneg = 50;
    o.n_case1 = 50;
    o.n_closed_form = 50;
    o.n_mid = 50;
    o.n_bell_sym = 50;
    o.n_xstate = 50;
    o.n_pure = 50;
    o.n_product = 50;
    o.n_lu_direct = 50;
    o.n_lu_optimized = 3;
    o.n_determinism = 3;
    return o;
}

// ---------------------------------------------------------------------------
// Suites

inline SuiteResult suite_linalg_eigensystem(const VerifyOptions& opt) {
    Rng rng(101);
    double worst = 0.0;
    int checks = 0;
    auto exercise = [&](auto hermitian) {
        const auto es = linalg::hermitian_eigensystem(hermitian);
        constexpr int n = std::decay_t<decltype(hermitian)>::dim;
        std::decay_t<decltype(hermitian)> reconstruction;
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    reconstruction(i, j) +=
                        es.values[k] * es.vectors(i, k) * std::conj(es.vectors(j, k));
        worst = std::max(worst, linalg::max_abs_diff(reconstruction, hermitian));
        worst = std::max(worst, linalg::max_abs_diff(es.vectors.adjoint() * es.vectors,
                                                     std::decay_t<decltype(hermitian)>::identity()));
        for (int k = 1; k < n; ++k)
            if (es.values[k] < es.values[k - 1]) worst = 1.0;  // ordering violation
        ++checks;
    };
    for (int trial = 0; trial < opt.n_linalg; ++trial) {
        const Matrix4 g4 = random_ginibre4(rng);
        exercise(0.5 * (g4 + g4.adjoint()));
        const Matrix2 g2 = random_ginibre2(rng);
        exercise(0.5 * (g2 + g2.adjoint()));
    }
    return finish("linalg/eigensystem-reconstruction", 1e-9, checks, worst);
}

inline SuiteResult suite_linalg_trace_sum(const VerifyOptions& opt) {
    Rng rng(102);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_linalg; ++trial) {
        const Matrix4 g = random_ginibre4(rng);
        const Matrix4 h = 0.5 * (g + g.adjoint());
        const auto es = linalg::hermitian_eigensystem(h);
        double sum = 0.0;
        for (double v : es.values) sum += v;
        worst = std::max(worst, std::abs(sum - h.trace().real()));
    }
    return finish("linalg/eigenvalue-sum-equals-trace", 1e-10, opt.n_linalg, worst);
}

inline SuiteResult suite_linalg_orthogonal_svd(const VerifyOptions& opt) {
    Rng rng(103);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_linalg; ++trial) {
        RealMatrix3 r = rotation_of_unitary(random_unitary2(rng));
        if (trial % 2 == 1)
            for (int j = 0; j < 3; ++j) r(1, j) = -r(1, j);  // include reflections
        const auto sv = linalg::singular_values_3x3(r);
        for (double s : sv) worst = std::max(worst, std::abs(s - 1.0));
    }
    return finish("linalg/orthogonal-singular-values", 1e-10, opt.n_linalg, worst);
}

inline SuiteResult suite_linalg_partial_trace_linearity(const VerifyOptions& opt) {
    Rng rng(104);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_linalg; ++trial) {
        const Matrix4 m = random_ginibre4(rng);
        const Matrix4 n = random_ginibre4(rng);
        const Complex alpha(u(rng), u(rng)), beta(u(rng), u(rng));
        for (auto side : {linalg::Subsystem::A, linalg::Subsystem::B}) {
            const Matrix2 lhs = linalg::partial_trace(alpha * m + beta * n, side);
            const Matrix2 rhs =
                alpha * linalg::partial_trace(m, side) + beta * linalg::partial_trace(n, side);
            worst = std::max(worst, linalg::max_abs_diff(lhs, rhs));
        }
        worst = std::max(worst,
                         std::abs(linalg::partial_trace(m, linalg::Subsystem::A).trace() - m.trace()));
    }
    return finish("linalg/partial-trace-linearity", 1e-12, opt.n_linalg, worst);
}

inline SuiteResult suite_states_pauli_roundtrip(const VerifyOptions& opt) {
    Rng rng(105);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_roundtrip; ++trial) {
        const DensityMatrix2Q rho = random_state(rng);
        const PauliDecomposition d = states::pauli_decompose(rho);
        worst = std::max(worst,
                         linalg::max_abs_diff(states::matrix_from_pauli(d), rho.matrix()));
        const PauliDecomposition d2 = states::pauli_decompose(states::from_pauli(d));
        for (int i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(d2.bloch_a[i] - d.bloch_a[i]));
            worst = std::max(worst, std::abs(d2.bloch_b[i] - d.bloch_b[i]));
            for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(d2.corr(i, j) - d.corr(i, j)));
        }
    }
    return finish("states/pauli-roundtrip", 1e-10, opt.n_roundtrip, worst);
}

/// Eigenvalues across the physical Bell-diagonal tetrahedron on a 20^3
/// parameter grid, solver versus closed formulas.
inline SuiteResult suite_states_bell_diagonal_spectrum(const VerifyOptions&) {
    double worst = 0.0;
    int checks = 0;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
            for (int k = 0; k < 20; ++k) {
                const double f1 = -1.0 + 2.0 * i / 19.0;
                const double f2 = -1.0 + 2.0 * j / 19.0;
                const double f3 = -1.0 + 2.0 * k / 19.0;
                auto lambdas = states::bell_diagonal_eigenvalues(f1, f2, f3);
                if (*std::min_element(lambdas.begin(), lambdas.end()) < 0.0) continue;
                const DensityMatrix2Q rho = states::bell_diagonal(f1, f2, f3);
                const auto es = linalg::hermitian_eigensystem(rho.matrix());
                std::sort(lambdas.begin(), lambdas.end());
                for (int m = 0; m < 4; ++m)
                    worst = std::max(worst, std::abs(es.values[m] - lambdas[m]));
                ++checks;
            }
    return finish("states/bell-diagonal-spectrum-20^3", 1e-10, checks, worst);
}

inline SuiteResult suite_states_variance_formula(const VerifyOptions& opt) {
    Rng rng(106);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_variance; ++trial) {
        const Matrix2 rho = random_qubit_density(rng);
        const Direction b = random_direction(rng);
        const Matrix2 sb = measurement::spin_component(b);
        const double second_moment = linalg::trace_product(sb * sb, rho).real();
        const double mean = linalg::trace_product(sb, rho).real();
        const double bloch_along = states::dot3(states::bloch_vector(rho), b.as_array());
        worst = std::max(worst, std::abs(second_moment - mean * mean -
                                         (0.25 - bloch_along * bloch_along)));
    }
    return finish("states/spin-variance-formula", 1e-10, opt.n_variance, worst);
}

inline SuiteResult suite_states_eigenbasis_commutation(const VerifyOptions& opt) {
    Rng rng(107);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_variance; ++trial) {
        const Matrix2 rho = random_qubit_density(rng, 1e-3);
        const Direction bloch_dir = Direction::normalized(states::bloch_vector(rho));
        for (int outcome : {+1, -1}) {
            const Matrix2 proj = measurement::projector(bloch_dir, outcome);
            worst = std::max(worst, linalg::max_abs_diff(proj * rho, rho * proj));
        }
    }
    return finish("states/bloch-projectors-commute", 1e-10, opt.n_variance, worst);
}

/// I_Q of the dephased state equals the classical mutual information of the
/// outcome table, for random (state, a, b).
inline SuiteResult suite_measurement_identity(const VerifyOptions& opt) {
    Rng rng(108);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_identity; ++trial) {
        const DensityMatrix2Q rho = random_state(rng);
        const Direction a = random_direction(rng), b = random_direction(rng);
        const double classical = measures::classical_mutual_information(rho, a, b);
        const double quantum_of_dephased =
            measures::quantum_mutual_information(measurement::post_measurement_state(rho, a, b));
        worst = std::max(worst, std::abs(classical - quantum_of_dephased));
    }
    return finish("measurement/dephasing-identity", 1e-9, opt.n_identity, worst);
}

inline SuiteResult suite_measurement_two_path(const VerifyOptions& opt) {
    Rng rng(109);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_two_path; ++trial) {
        const DensityMatrix2Q rho = random_state(rng);
        const PauliDecomposition d = states::pauli_decompose(rho);
        const Direction a = random_direction(rng), b = random_direction(rng);
        const auto trace_route = measurement::joint_probabilities(rho, a, b).as_array();
        const auto pauli_route =
            measurement::joint_probabilities_from_decomposition(d, a, b).as_array();
        for (int k = 0; k < 4; ++k)
            worst = std::max(worst, std::abs(trace_route[k] - pauli_route[k]));
    }
    return finish("measurement/projector-vs-pauli-route", 1e-12, opt.n_two_path, worst);
}

inline SuiteResult suite_measurement_antipodal(const VerifyOptions& opt) {
    Rng rng(110);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_two_path; ++trial) {
        const DensityMatrix2Q rho = random_state(rng);
        const Direction a = random_direction(rng), b = random_direction(rng);
        const auto table = measurement::joint_probabilities(rho, a, b);
        const auto flipped = measurement::joint_probabilities(rho, -a, b);
        worst = std::max({worst, std::abs(flipped.p_pp - table.p_mp),
                          std::abs(flipped.p_pm - table.p_mm), std::abs(flipped.p_mp - table.p_pp),
                          std::abs(flipped.p_mm - table.p_pm)});
        worst = std::max(worst, std::abs(measures::table_mutual_information(flipped) -
                                         measures::table_mutual_information(table)));
    }
    return finish("measurement/antipodal-symmetry", 1e-12, opt.n_two_path, worst);
}

inline SuiteResult suite_measurement_rotation_covariance(const VerifyOptions& opt) {
    Rng rng(111);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_covariance; ++trial) {
        const DensityMatrix2Q rho = random_state(rng);
        const Direction a = random_direction(rng), b = random_direction(rng);
        const Matrix2 u = random_unitary2(rng);
        const RealMatrix3 r = rotation_of_unitary(u);
        const DensityMatrix2Q rotated = apply_local_unitaries(rho, u, u);
        const auto before = measurement::joint_probabilities(rho, a, b).as_array();
        const auto after =
            measurement::joint_probabilities(rotated, rotate(r, a), rotate(r, b)).as_array();
        for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(before[k] - after[k]));
    }
    return finish("measurement/rotation-covariance", 1e-10, opt.n_covariance, worst);
}

inline SuiteResult suite_measures_nonnegativity(const VerifyOptions& opt) {
    Rng rng(112);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_nonneg; ++trial) {
        const DensityMatrix2Q rho = random_state(rng);
        const Direction a = random_direction(rng), b = random_direction(rng);
        worst = std::max(worst, -measures::quantumness_at(rho, a, b));
    }
    return finish("measures/quantumness-nonnegative", 1e-9, opt.n_nonneg, std::max(0.0, worst));
}

inline SuiteResult suite_measures_probability_preclip(const VerifyOptions& opt) {
    Rng rng(113);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_nonneg; ++trial) {
        const DensityMatrix2Q rho = random_state(rng);
        const auto raw =
            measurement::joint_probabilities_raw(rho, random_direction(rng), random_direction(rng));
        for (double p : raw) worst = std::max(worst, -p);
    }
    return finish("measures/raw-probability-floor", 1e-12, opt.n_nonneg, std::max(0.0, worst));
}

/// In the both-nonzero case q_lhv is exactly Q at the Bloch directions.
inline SuiteResult suite_measures_case1_consistency(const VerifyOptions& opt) {
    Rng rng(114);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_case1; ++trial) {
        const DensityMatrix2Q rho = random_state_min_bloch(rng, 0.05);
        const PauliDecomposition d = states::pauli_decompose(rho);
        const auto frag = measures::q_lhv(rho, opt.search);
        const Direction a_hat = Direction::normalized(d.bloch_a);
        const Direction b_hat = Direction::normalized(d.bloch_b);
        worst = std::max(worst,
                         std::abs(frag.q_lhv - measures::quantumness_at(rho, a_hat, b_hat)));
    }
    return finish("measures/case1-equals-quantumness-at-bloch", 1e-12, opt.n_case1, worst);
}

/// Closed-form two-direction capacity versus the brute-force search.
inline SuiteResult suite_measures_bothzero_closed_form(const VerifyOptions& opt) {
    Rng rng(115);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_closed_form; ++trial) {
        const auto f = random_bell_diagonal_f(rng);
        const DensityMatrix2Q rho = states::bell_diagonal(f[0], f[1], f[2]);
        const PauliDecomposition d = states::pauli_decompose(rho);
        const double closed = measures::classical_capacity_closed_form(
            std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])}));
        const auto brute = optimizer::extremize_two_directions(
            [&](const Direction& a, const Direction& b) {
                return measures::classical_mutual_information(d, a, b);
            },
            optimizer::Mode::Maximize, opt.search);
        worst = std::max(worst, std::abs(closed - brute.value));
    }
    return finish("measures/closed-form-vs-brute-force", 1e-4, opt.n_closed_form, worst);
}

/// Both-nonzero case: the table route (q_lhv) and the eigenbasis-projector
/// route (q_mid) must coincide.
inline SuiteResult suite_measures_mid_equivalence(const VerifyOptions& opt) {
    Rng rng(116);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_mid; ++trial) {
        const DensityMatrix2Q rho = random_state_min_bloch(rng, 0.05);
        const auto frag = measures::q_lhv(rho, opt.search);
        const auto mid = measures::q_mid(rho, opt.search);
        worst = mid ? std::max(worst, std::abs(frag.q_lhv - *mid)) : 1.0;
    }
    return finish("measures/mid-equals-qlhv", 1e-12, opt.n_mid, worst);
}

inline SuiteResult suite_measures_symmetric_discord_bell(const VerifyOptions& opt) {
    Rng rng(117);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_bell_sym; ++trial) {
        const auto f = random_bell_diagonal_f(rng);
        const DensityMatrix2Q rho = states::bell_diagonal(f[0], f[1], f[2]);
        const auto closed = measures::bell_diagonal_closed_forms(f[0], f[1], f[2]);
        const auto sym = measures::symmetric_discord(rho, opt.search);
        worst = std::max(worst, std::abs(sym.value - closed.q_lhv));
    }
    return finish("measures/symmetric-discord-vs-closed-form", 1e-5, opt.n_bell_sym, worst);
}

/// X-states with r = 0 under the e3-optimality condition: discord equals
/// q_lhv and the optimal measurement direction is e3.
inline std::pair<SuiteResult, SuiteResult> suite_measures_discord_xstate(const VerifyOptions& opt) {
    Rng rng(118);
    double worst_value = 0.0;
    double worst_angle = 0.0;
    const Direction e3(0.0, 0.0, 1.0);
    for (int trial = 0; trial < opt.n_xstate; ++trial) {
        const auto p = random_xstate_for_discord(rng);
        const DensityMatrix2Q rho = states::x_state(p.c1, p.c2, p.c3, p.r, p.s);
        const auto frag = measures::q_lhv(rho, opt.search);
        const auto discord = measures::quantum_discord_A(rho, opt.search);
        worst_value = std::max(worst_value, std::abs(frag.q_lhv - discord.value));
        worst_angle = std::max(worst_angle, states::axis_angle(discord.a_m, e3));
    }
    return {finish("measures/discord-equals-qlhv-xstate", 1e-5, opt.n_xstate, worst_value),
            finish("measures/discord-direction-e3-xstate", 1e-3, opt.n_xstate, worst_angle)};
}

/// Pure Schmidt states: q_lhv, MID, symmetric discord and discord all equal
/// the reduced-state entropy H2(q).
inline SuiteResult suite_measures_pure_state(const VerifyOptions& opt) {
    Rng rng(119);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_pure; ++trial) {
        double q = 0.0;
        const DensityMatrix2Q rho = random_schmidt_pure(rng, q);
        const double expected = measures::binary_entropy(q);
        const auto report = measures::full_report(rho, opt.search);
        worst = std::max(worst, std::abs(report.q_lhv - expected));
        worst = report.q_mid ? std::max(worst, std::abs(*report.q_mid - expected)) : 1.0;
        worst = std::max(worst, std::abs(report.q_discord_a - expected));
        worst = std::max(worst, std::abs(report.q_sym - expected));
    }
    return finish("measures/pure-schmidt-states", 1e-5, opt.n_pure, worst);
}

inline SuiteResult suite_measures_product_states(const VerifyOptions& opt) {
    Rng rng(120);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_product; ++trial) {
        const DensityMatrix2Q rho = random_product_state(rng);
        const auto report = measures::full_report(rho, opt.search);
        worst = std::max({worst, std::abs(report.i_quantum), std::abs(report.i_lhv),
                          std::abs(report.q_lhv), std::abs(report.q_discord_a),
                          std::abs(report.q_sym)});
        worst = report.q_mid ? std::max(worst, std::abs(*report.q_mid)) : 1.0;
    }
    return finish("measures/product-states-vanish", 1e-9, opt.n_product, worst);
}

/// Local-unitary invariance for the paths that involve no direction search.
inline SuiteResult suite_measures_lu_invariance_direct(const VerifyOptions& opt) {
    Rng rng(121);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_lu_direct; ++trial) {
        const DensityMatrix2Q rho = random_state_min_bloch(rng, 0.05);
        const Matrix2 ua = random_unitary2(rng), ub = random_unitary2(rng);
        const DensityMatrix2Q rotated = apply_local_unitaries(rho, ua, ub);
        const RealMatrix3 ra = rotation_of_unitary(ua), rb = rotation_of_unitary(ub);

        worst = std::max(worst, std::abs(measures::quantum_mutual_information(rho) -
                                         measures::quantum_mutual_information(rotated)));
        const auto frag = measures::q_lhv(rho, opt.search);
        const auto frag_rot = measures::q_lhv(rotated, opt.search);
        worst = std::max(worst, std::abs(frag.q_lhv - frag_rot.q_lhv));
        const auto mid = measures::q_mid(rho, opt.search);
        const auto mid_rot = measures::q_mid(rotated, opt.search);
        worst = (mid && mid_rot) ? std::max(worst, std::abs(*mid - *mid_rot)) : 1.0;
        const Direction a = random_direction(rng), b = random_direction(rng);
        worst = std::max(worst, std::abs(measures::quantumness_at(rho, a, b) -
                                         measures::quantumness_at(rotated, rotate(ra, a),
                                                                  rotate(rb, b))));
    }
    return finish("measures/local-unitary-invariance", 1e-9, opt.n_lu_direct, worst);
}

/// Local-unitary invariance for the searched measures, at the tolerance the
/// finite search warrants.
inline SuiteResult suite_measures_lu_invariance_optimized(const VerifyOptions& opt) {
    Rng rng(122);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_lu_optimized; ++trial) {
        const DensityMatrix2Q rho = random_state(rng);
        const DensityMatrix2Q rotated =
            apply_local_unitaries(rho, random_unitary2(rng), random_unitary2(rng));
        worst = std::max(worst, std::abs(measures::quantum_discord_A(rho, opt.search).value -
                                         measures::quantum_discord_A(rotated, opt.search).value));
        worst = std::max(worst, std::abs(measures::symmetric_discord(rho, opt.search).value -
                                         measures::symmetric_discord(rotated, opt.search).value));
    }
    return finish("measures/local-unitary-invariance-searched", 1e-5, opt.n_lu_optimized, worst);
}

inline SuiteResult suite_optimizer_determinism(const VerifyOptions& opt) {
    Rng rng(123);
    double worst = 0.0;
    for (int trial = 0; trial < opt.n_determinism; ++trial) {
        const auto f = random_bell_diagonal_f(rng);
        const PauliDecomposition d =
            states::pauli_decompose(states::bell_diagonal(f[0], f[1], f[2]));
        auto objective = [&](const Direction& a, const Direction& b) {
            return measures::classical_mutual_information(d, a, b);
        };
        const auto first = optimizer::extremize_two_directions(objective,
                                                               optimizer::Mode::Maximize, opt.search);
        const auto second = optimizer::extremize_two_directions(objective,
                                                                optimizer::Mode::Maximize, opt.search);
        worst = std::max({worst, std::abs(first.value - second.value),
                          std::abs(first.a.x - second.a.x), std::abs(first.a.y - second.a.y),
                          std::abs(first.a.z - second.a.z), std::abs(first.b.x - second.b.x),
                          std::abs(first.b.y - second.b.y), std::abs(first.b.z - second.b.z)});
    }
    return finish("optimizer/determinism", 0.0, opt.n_determinism, worst);
}

inline SuiteResult suite_optimizer_monotonicity(const VerifyOptions& opt) {
    Rng rng(124);
    double worst = 0.0;
    int checks = 0;
    for (int trial = 0; trial < opt.n_determinism; ++trial) {
        const DensityMatrix2Q rho = random_state(rng);
        const PauliDecomposition d = states::pauli_decompose(rho);
        const Direction b_fixed = random_direction(rng);
        const auto max_run = optimizer::extremize_one_direction(
            [&](const Direction& a) { return measures::classical_mutual_information(d, a, b_fixed); },
            optimizer::Mode::Maximize, opt.search);
        for (std::size_t k = 1; k < max_run.refinement_trace.size(); ++k)
            worst = std::max(worst,
                             max_run.refinement_trace[k - 1] - max_run.refinement_trace[k]);
        const auto min_run = optimizer::extremize_one_direction(
            [&](const Direction& a) { return measures::conditional_entropy_A(rho, a); },
            optimizer::Mode::Minimize, opt.search);
        for (std::size_t k = 1; k < min_run.refinement_trace.size(); ++k)
            worst = std::max(worst,
                             min_run.refinement_trace[k] - min_run.refinement_trace[k - 1]);
        ++checks;
    }
    return finish("optimizer/refinement-monotonicity", 0.0, checks, std::max(0.0, worst));
}

inline std::vector<SuiteResult> run_all(const VerifyOptions& opt) {
    std::vector<SuiteResult> results;
    results.push_back(suite_linalg_eigensystem(opt));
    results.push_back(suite_linalg_trace_sum(opt));
    results.push_back(suite_linalg_orthogonal_svd(opt));
    results.push_back(suite_linalg_partial_trace_linearity(opt));
    results.push_back(suite_states_pauli_roundtrip(opt));
    results.push_back(suite_states_bell_diagonal_spectrum(opt));
    results.push_back(suite_states_variance_formula(opt));
    results.push_back(suite_states_eigenbasis_commutation(opt));
    results.push_back(suite_measurement_identity(opt));
    results.push_back(suite_measurement_two_path(opt));
    results.push_back(suite_measurement_antipodal(opt));
    results.push_back(suite_measurement_rotation_covariance(opt));
    results.push_back(suite_measures_nonnegativity(opt));
    results.push_back(suite_measures_probability_preclip(opt));
    results.push_back(suite_measures_case1_consistency(opt));
    results.push_back(suite_measures_bothzero_closed_form(opt));
    results.push_back(suite_measures_mid_equivalence(opt));
    results.push_back(suite_measures_symmetric_discord_bell(opt));
    auto [discord_value, discord_direction] = suite_measures_discord_xstate(opt);
    results.push_back(discord_value);
    results.push_back(discord_direction);
    results.push_back(suite_measures_pure_state(opt));
    results.push_back(suite_measures_product_states(opt));
    results.push_back(suite_measures_lu_invariance_direct(opt));
    results.push_back(suite_measures_lu_invariance_optimized(opt));
    results.push_back(suite_optimizer_determinism(opt));
    results.push_back(suite_optimizer_monotonicity(opt));
    return results;
}

} // namespace qumi::verify
