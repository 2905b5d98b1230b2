#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>

#include "qumi/errors.hpp"
#include "qumi/linalg.hpp"
#include "qumi/measurement.hpp"
#include "qumi/optimizer.hpp"
#include "qumi/states.hpp"

// Information-theoretic quantities for two-qubit states: entropies, quantum
// and classical mutual information, the mutual-information quantumness
// q_lhv with its three-case direction rule, measurement-induced
// disturbance, quantum discord and symmetric discord. Logarithms are base 2
// throughout; all results are in bits.
namespace qumi::measures {

using linalg::Matrix2;
using linalg::Matrix4;
using measurement::ProbabilityTable2x2;
using optimizer::SearchConfig;
using states::DensityMatrix2Q;
using states::Direction;
using states::PauliDecomposition;

/// Shannon entropy in bits; 0 log 0 = 0, entries in [-1e-9, 0) are treated
/// as round-off zeros.
inline double shannon_entropy(std::span<const double> p) {
    double sum = 0.0;
    double h = 0.0;
    for (double v : p) {
        if (v < -states::kPsdTol) {
            std::ostringstream os;
            os << "probability " << v << " is negative";
            throw Error(ErrorKind::InvalidDistribution, os.str());
        }
        if (v <= 0.0) continue;
        sum += v;
        h -= v * std::log2(v);
    }
    if (std::abs(sum - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "probabilities sum to " << sum;
        throw Error(ErrorKind::InvalidDistribution, os.str());
    }
    return std::max(0.0, h);
}

inline double shannon_entropy(std::initializer_list<double> p) {
    return shannon_entropy(std::span<const double>(p.begin(), p.size()));
}

/// H2(x), the binary Shannon entropy.
inline double binary_entropy(double x) {
    double h = 0.0;
    if (x > 0.0) h -= x * std::log2(x);
    if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
    return std::max(0.0, h);
}

/// Von Neumann entropy of a density matrix (2x2 or 4x4), in bits.
template <int N>
double von_neumann_entropy(const linalg::ComplexMatrix<N>& rho) {
    const auto es = linalg::hermitian_eigensystem(rho);
    if (es.values[0] < -states::kPsdTol) {
        std::ostringstream os;
        os << "min eigenvalue " << es.values[0];
        throw Error(ErrorKind::NotPositive, os.str());
    }
    return shannon_entropy(std::span<const double>(es.values.data(), N));
}

inline double von_neumann_entropy(const DensityMatrix2Q& rho) {
    return von_neumann_entropy(rho.matrix());
}

/// I_Q = S(rho_A) + S(rho_B) - S(rho_AB).
inline double quantum_mutual_information(const DensityMatrix2Q& rho) {
    const Matrix2 rho_a = linalg::partial_trace(rho.matrix(), linalg::Subsystem::A);
    const Matrix2 rho_b = linalg::partial_trace(rho.matrix(), linalg::Subsystem::B);
    return von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(rho);
}

/// Mutual information of a joint outcome table.
inline double table_mutual_information(const ProbabilityTable2x2& t) {
    const auto m = measurement::marginals(t);
    const auto joint = t.as_array();
    return shannon_entropy(std::span<const double>(m.a.data(), 2)) +
           shannon_entropy(std::span<const double>(m.b.data(), 2)) -
           shannon_entropy(std::span<const double>(joint.data(), 4));
}

/// I(a,b) by the definitional projector-trace route.
inline double classical_mutual_information(const DensityMatrix2Q& rho, const Direction& a,
                                           const Direction& b) {
    return table_mutual_information(measurement::joint_probabilities(rho, a, b));
}

/// I(a,b) from a precomputed Pauli decomposition; the cheap path used
/// inside direction searches.
inline double classical_mutual_information(const PauliDecomposition& d, const Direction& a,
                                           const Direction& b) {
    return table_mutual_information(measurement::joint_probabilities_from_decomposition(d, a, b));
}

/// Q(a,b) = I_Q - I(a,b).
inline double quantumness_at(const DensityMatrix2Q& rho, const Direction& a, const Direction& b) {
    return quantum_mutual_information(rho) - classical_mutual_information(rho, a, b);
}

/// Maximum classical mutual information when both Bloch vectors vanish:
/// 1 - H2((1+C)/2), with C the largest singular value of the correlation
/// matrix.
inline double classical_capacity_closed_form(double c) {
    if (c < 0.0 || c > 1.0) {
        std::ostringstream os;
        os << "correlation strength " << c << " outside [0, 1]";
        throw Error(ErrorKind::ParamOutOfRange, os.str());
    }
    return 1.0 - binary_entropy(0.5 * (1.0 + c));
}

enum class CaseTag { BothBlochNonzero, OneBlochZeroA, OneBlochZeroB, BothBlochZero };

inline const char* to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::BothBlochNonzero: return "BothBlochNonzero";
        case CaseTag::OneBlochZeroA: return "OneBlochZero(A)";
        case CaseTag::OneBlochZeroB: return "OneBlochZero(B)";
        case CaseTag::BothBlochZero: return "BothBlochZero";
    }
    return "Unknown";
}

struct QlhvResult {
    double i_lhv;
    double q_lhv;
    CaseTag case_tag;
    std::optional<Direction> optimal_a;
    std::optional<Direction> optimal_b;
};

namespace detail {

inline QlhvResult q_lhv_impl(const PauliDecomposition& d, double i_quantum,
                             const SearchConfig& cfg) {
    const double na = states::norm3(d.bloch_a);
    const double nb = states::norm3(d.bloch_b);
    const double thr = cfg.bloch_zero_threshold;

    QlhvResult out{0.0, 0.0, CaseTag::BothBlochZero, std::nullopt, std::nullopt};
    if (na >= thr && nb >= thr) {
        // Both Bloch vectors set the directions; no optimization.
        const Direction a_hat = Direction::normalized(d.bloch_a);
        const Direction b_hat = Direction::normalized(d.bloch_b);
        out.case_tag = CaseTag::BothBlochNonzero;
        out.i_lhv = classical_mutual_information(d, a_hat, b_hat);
        out.optimal_a = a_hat;
        out.optimal_b = b_hat;
    } else if (na < thr && nb < thr) {
        // Exact two-direction maximum via the top singular value of C.
        const auto top = linalg::top_singular_triplet_3x3(d.corr);
        out.case_tag = CaseTag::BothBlochZero;
        out.i_lhv = classical_capacity_closed_form(std::min(top.value, 1.0));
        if (top.value > 1e-9) {
            out.optimal_a = Direction::normalized(top.left);
            out.optimal_b = Direction::normalized(top.right);
        }
    } else if (na < thr) {
        const Direction b_hat = Direction::normalized(d.bloch_b);
        const auto res = optimizer::extremize_one_direction(
            [&](const Direction& a) { return classical_mutual_information(d, a, b_hat); },
            optimizer::Mode::Maximize, cfg);
        out.case_tag = CaseTag::OneBlochZeroA;
        out.i_lhv = res.value;
        out.optimal_a = res.direction;
        out.optimal_b = b_hat;
    } else {
        const Direction a_hat = Direction::normalized(d.bloch_a);
        const auto res = optimizer::extremize_one_direction(
            [&](const Direction& b) { return classical_mutual_information(d, a_hat, b); },
            optimizer::Mode::Maximize, cfg);
        out.case_tag = CaseTag::OneBlochZeroB;
        out.i_lhv = res.value;
        out.optimal_a = a_hat;
        out.optimal_b = res.direction;
    }
    out.q_lhv = i_quantum - out.i_lhv;
    return out;
}

} // namespace detail

/// Quantumness of mutual information. The measurement directions are the
/// Bloch directions where defined; a vanishing Bloch vector frees its
/// direction, which is then maximized over (analytically when both vanish).
inline QlhvResult q_lhv(const DensityMatrix2Q& rho, const SearchConfig& cfg = {}) {
    cfg.check();
    return detail::q_lhv_impl(states::pauli_decompose(rho), quantum_mutual_information(rho), cfg);
}

/// Measurement-induced disturbance: I_Q lost by dephasing in the eigenbases
/// of the reduced states. Empty when either reduced state is maximally
/// mixed, since its eigenbasis is then not unique.
inline std::optional<double> q_mid(const DensityMatrix2Q& rho, const SearchConfig& cfg = {}) {
    cfg.check();
    const Matrix2 rho_a = linalg::partial_trace(rho.matrix(), linalg::Subsystem::A);
    const Matrix2 rho_b = linalg::partial_trace(rho.matrix(), linalg::Subsystem::B);
    if (states::norm3(states::bloch_vector(rho_a)) < cfg.bloch_zero_threshold ||
        states::norm3(states::bloch_vector(rho_b)) < cfg.bloch_zero_threshold)
        return std::nullopt;

    auto eigen_projectors = [](const Matrix2& m) {
        const auto es = linalg::hermitian_eigensystem(m);
        std::array<Matrix2, 2> projectors;
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    projectors[k](i, j) = es.vectors(i, k) * std::conj(es.vectors(j, k));
        return projectors;
    };
    const auto pa = eigen_projectors(rho_a);
    const auto pb = eigen_projectors(rho_b);
    const DensityMatrix2Q dephased = measurement::dephase_in_bases(rho, pa[0], pa[1], pb[0], pb[1]);
    return quantum_mutual_information(rho) - quantum_mutual_information(dephased);
}

/// Sum_mu p_mu S(rho_mu) for a projective measurement on A; degenerate
/// branches contribute zero.
inline double conditional_entropy_A(const DensityMatrix2Q& rho, const Direction& a) {
    const auto ens = measurement::conditional_states_A(rho, a);
    double total = 0.0;
    if (ens.rho_plus) total += ens.p_plus * von_neumann_entropy(*ens.rho_plus);
    if (ens.rho_minus) total += ens.p_minus * von_neumann_entropy(*ens.rho_minus);
    return total;
}

struct DiscordResult {
    double value;
    Direction a_m;  // optimal measurement direction on A
};

/// Quantum discord for projective measurement on A:
/// S(rho_A) - S(rho_AB) + min_a sum_mu p_mu S(rho_mu).
inline DiscordResult quantum_discord_A(const DensityMatrix2Q& rho, const SearchConfig& cfg = {}) {
    cfg.check();
    const double s_a =
        von_neumann_entropy(linalg::partial_trace(rho.matrix(), linalg::Subsystem::A));
    const double s_ab = von_neumann_entropy(rho);
    const auto res = optimizer::extremize_one_direction(
        [&](const Direction& a) { return conditional_entropy_A(rho, a); },
        optimizer::Mode::Minimize, cfg);

    // Cross-check the conditional entropy at the optimum against the
    // dephasing identity S(rho'_AB) - S(rho'_A).
    const DensityMatrix2Q dephased =
        measurement::dephase_a(rho, measurement::projector(res.direction, +1),
                               measurement::projector(res.direction, -1));
    const double via_identity =
        von_neumann_entropy(dephased) -
        von_neumann_entropy(linalg::partial_trace(dephased.matrix(), linalg::Subsystem::A));
    if (std::abs(via_identity - res.value) > 1e-9) {
        std::ostringstream os;
        os << "conditional entropy " << res.value << " disagrees with dephasing identity "
           << via_identity;
        throw std::logic_error(os.str());
    }

    return {s_a - s_ab + res.value, res.direction};
}

struct SymmetricDiscordResult {
    double value;
    Direction a;
    Direction b;
};

/// Symmetric discord: I_Q minus the two-direction maximum of classical
/// mutual information.
inline SymmetricDiscordResult symmetric_discord(const DensityMatrix2Q& rho,
                                                const SearchConfig& cfg = {}) {
    cfg.check();
    const PauliDecomposition d = states::pauli_decompose(rho);
    const auto res = optimizer::extremize_two_directions(
        [&](const Direction& a, const Direction& b) { return classical_mutual_information(d, a, b); },
        optimizer::Mode::Maximize, cfg);
    return {quantum_mutual_information(rho) - res.value, res.a, res.b};
}

struct BellDiagonalClosedForms {
    double i_quantum;
    double q_lhv;
};

/// Closed forms for a Bell-diagonal state: I_Q = 2 - H(lambda) and
/// q_lhv = 1 - H(lambda) + H2((1+C)/2) with C = max |f_i|.
inline BellDiagonalClosedForms bell_diagonal_closed_forms(double f1, double f2, double f3) {
    const auto lambdas = states::bell_diagonal_eigenvalues(f1, f2, f3);
    for (double lam : lambdas) {
        if (lam < -states::kPsdTol) {
            std::ostringstream os;
            os << "Bell-diagonal eigenvalue " << lam;
            throw Error(ErrorKind::NotPositive, os.str());
        }
    }
    const double h4 = shannon_entropy(std::span<const double>(lambdas.data(), 4));
    const double c = std::max({std::abs(f1), std::abs(f2), std::abs(f3)});
    return {2.0 - h4, 1.0 - h4 + binary_entropy(0.5 * (1.0 + std::min(c, 1.0)))};
}

/// Condition under which the optimal discord measurement on A for an
/// X-state is along e3 (axes pre-ordered so |c1| >= |c2|).
inline bool discord_condition_x_state(double c1, double c2, double c3, double r) {
    if (std::abs(c1) < std::abs(c2)) {
        std::ostringstream os;
        os << "|c1| = " << std::abs(c1) << " < |c2| = " << std::abs(c2)
           << "; reorder the axes first";
        throw Error(ErrorKind::PreconditionViolated, os.str());
    }
    return c1 * c1 + r * r <= c3 * c3;
}

/// All measures for one state.
struct MeasureReport {
    double i_quantum;
    double i_lhv;
    double q_lhv;
    CaseTag case_tag;
    std::optional<Direction> optimal_a;
    std::optional<Direction> optimal_b;
    std::optional<double> q_mid;  // empty = not unique
    double q_discord_a;
    double q_sym;
};

inline MeasureReport full_report(const DensityMatrix2Q& rho, const SearchConfig& cfg = {}) {
    cfg.check();
    const double i_quantum = quantum_mutual_information(rho);
    const auto frag = detail::q_lhv_impl(states::pauli_decompose(rho), i_quantum, cfg);

    MeasureReport report{};
    report.i_quantum = i_quantum;
    report.i_lhv = frag.i_lhv;
    report.q_lhv = frag.q_lhv;
    report.case_tag = frag.case_tag;
    report.optimal_a = frag.optimal_a;
    report.optimal_b = frag.optimal_b;
    report.q_mid = q_mid(rho, cfg);
    report.q_discord_a = quantum_discord_A(rho, cfg).value;
    report.q_sym = symmetric_discord(rho, cfg).value;
    return report;
}

} // namespace qumi::measures
