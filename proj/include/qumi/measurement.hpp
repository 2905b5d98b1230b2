#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <sstream>

#include "qumi/errors.hpp"
#include "qumi/linalg.hpp"
#include "qumi/states.hpp"

// Projective-measurement machinery: spin projectors, joint and marginal
// outcome probabilities, dephased post-measurement states and the
// conditional ensembles used by discord.
namespace qumi::measurement {

using linalg::Complex;
using linalg::Matrix2;
using linalg::Matrix4;
using states::DensityMatrix2Q;
using states::Direction;
using states::PauliDecomposition;

inline constexpr double kNegativeProbabilityTol = 1e-12;
inline constexpr double kTableSumTol = 1e-10;
inline constexpr double kDegenerateBranchTol = 1e-12;

/// Joint outcome probabilities p(eps_A, eps_B) for eps = +1/-1.
struct ProbabilityTable2x2 {
    double p_pp, p_pm, p_mp, p_mm;

    std::array<double, 4> as_array() const { return {p_pp, p_pm, p_mp, p_mm}; }
};

/// Builds a table from raw values: entries in [-1e-12, 0) are round-off and
/// clipped to zero, anything lower is rejected; the result is renormalized.
inline ProbabilityTable2x2 make_table(double pp, double pm, double mp, double mm) {
    std::array<double, 4> p{pp, pm, mp, mm};
    for (double& v : p) {
        if (v < -kNegativeProbabilityTol) {
            std::ostringstream os;
            os << "probability " << v << " below -1e-12";
            throw Error(ErrorKind::InvalidDistribution, os.str());
        }
        if (v < 0.0) v = 0.0;
    }
    const double sum = p[0] + p[1] + p[2] + p[3];
    if (std::abs(sum - 1.0) > kTableSumTol) {
        std::ostringstream os;
        os << "probabilities sum to " << sum;
        throw Error(ErrorKind::InvalidDistribution, os.str());
    }
    return {p[0] / sum, p[1] / sum, p[2] / sum, p[3] / sum};
}

/// n . sigma / 2, the spin component along n.
inline Matrix2 spin_component(const Direction& n) {
    Matrix2 m;
    m(0, 0) = 0.5 * n.z;
    m(1, 1) = -0.5 * n.z;
    m(0, 1) = Complex(0.5 * n.x, -0.5 * n.y);
    m(1, 0) = Complex(0.5 * n.x, 0.5 * n.y);
    return m;
}

/// Projector 1/2 +- S_n onto the outcome subspace of a spin measurement.
inline Matrix2 projector(const Direction& n, int outcome) {
    if (outcome != 1 && outcome != -1)
        throw Error(ErrorKind::ParamOutOfRange, "projector outcome must be +1 or -1");
    const Matrix2 s = spin_component(n);
    Matrix2 m = 0.5 * linalg::identity2();
    return outcome > 0 ? m + s : m - s;
}

/// Unclipped joint probabilities by the projector-trace route,
/// p = Tr[(Pi_A x Pi_B) rho], ordered (++, +-, -+, --).
inline std::array<double, 4> joint_probabilities_raw(const DensityMatrix2Q& rho,
                                                     const Direction& a, const Direction& b) {
    const Matrix2 pa_plus = projector(a, +1), pa_minus = projector(a, -1);
    const Matrix2 pb_plus = projector(b, +1), pb_minus = projector(b, -1);
    const Matrix4& m = rho.matrix();
    return {
        linalg::trace_product(linalg::kron(pa_plus, pb_plus), m).real(),
        linalg::trace_product(linalg::kron(pa_plus, pb_minus), m).real(),
        linalg::trace_product(linalg::kron(pa_minus, pb_plus), m).real(),
        linalg::trace_product(linalg::kron(pa_minus, pb_minus), m).real(),
    };
}

inline ProbabilityTable2x2 joint_probabilities(const DensityMatrix2Q& rho, const Direction& a,
                                               const Direction& b) {
    const auto raw = joint_probabilities_raw(rho, a, b);
    return make_table(raw[0], raw[1], raw[2], raw[3]);
}

/// Same table from the Pauli form
/// p = 1/4 (1 + eps_A t_a + eps_B t_b + eps_A eps_B a.C.b); kept as an
/// independent route and as the cheap path inside direction searches.
inline ProbabilityTable2x2 joint_probabilities_from_decomposition(const PauliDecomposition& d,
                                                                  const Direction& a,
                                                                  const Direction& b) {
    const auto av = a.as_array();
    const auto bv = b.as_array();
    const double ta = 2.0 * states::dot3(d.bloch_a, av);
    const double tb = 2.0 * states::dot3(d.bloch_b, bv);
    const double corr = states::dot3(av, linalg::multiply(d.corr, bv));
    return make_table(0.25 * (1.0 + ta + tb + corr), 0.25 * (1.0 + ta - tb - corr),
                      0.25 * (1.0 - ta + tb - corr), 0.25 * (1.0 - ta - tb + corr));
}

struct MarginalPair {
    std::array<double, 2> a;  // p(eps_A = +1), p(eps_A = -1)
    std::array<double, 2> b;
};

inline MarginalPair marginals(const ProbabilityTable2x2& t) {
    return {{t.p_pp + t.p_pm, t.p_mp + t.p_mm}, {t.p_pp + t.p_mp, t.p_pm + t.p_mm}};
}

/// Dephasing in explicit product bases: sum of (Pa x Pb) rho (Pa x Pb) over
/// the four projector pairs.
inline DensityMatrix2Q dephase_in_bases(const DensityMatrix2Q& rho, const Matrix2& pa_plus,
                                        const Matrix2& pa_minus, const Matrix2& pb_plus,
                                        const Matrix2& pb_minus) {
    Matrix4 out;
    const std::array<const Matrix2*, 2> pas{&pa_plus, &pa_minus};
    const std::array<const Matrix2*, 2> pbs{&pb_plus, &pb_minus};
    for (const Matrix2* pa : pas)
        for (const Matrix2* pb : pbs) {
            const Matrix4 proj = linalg::kron(*pa, *pb);
            out = out + proj * rho.matrix() * proj;
        }
    return DensityMatrix2Q::validate(out);
}

/// State after projective measurement of spin A along a and spin B along b.
inline DensityMatrix2Q post_measurement_state(const DensityMatrix2Q& rho, const Direction& a,
                                              const Direction& b) {
    return dephase_in_bases(rho, projector(a, +1), projector(a, -1), projector(b, +1),
                            projector(b, -1));
}

/// Dephasing on subsystem A only: sum of (Pa x I) rho (Pa x I).
inline DensityMatrix2Q dephase_a(const DensityMatrix2Q& rho, const Matrix2& pa_plus,
                                 const Matrix2& pa_minus) {
    const Matrix4 proj_plus = linalg::kron(pa_plus, linalg::identity2());
    const Matrix4 proj_minus = linalg::kron(pa_minus, linalg::identity2());
    const Matrix4 out =
        proj_plus * rho.matrix() * proj_plus + proj_minus * rho.matrix() * proj_minus;
    return DensityMatrix2Q::validate(out);
}

/// Outcome probabilities and normalized post-selected states for a
/// measurement on A. A branch with probability below 1e-12 is left empty
/// rather than normalized.
struct ConditionalEnsemble {
    double p_plus = 0.0;
    double p_minus = 0.0;
    std::optional<DensityMatrix2Q> rho_plus;
    std::optional<DensityMatrix2Q> rho_minus;
};

inline ConditionalEnsemble conditional_states_A(const DensityMatrix2Q& rho, const Direction& a) {
    ConditionalEnsemble out;
    const std::array<int, 2> outcomes{+1, -1};
    for (int mu : outcomes) {
        const Matrix4 proj = linalg::kron(projector(a, mu), linalg::identity2());
        const Matrix4 sandwiched = proj * rho.matrix() * proj;
        const double p = std::max(0.0, sandwiched.trace().real());
        std::optional<DensityMatrix2Q> conditional;
        if (p >= kDegenerateBranchTol)
            conditional = DensityMatrix2Q::validate((1.0 / p) * sandwiched);
        if (mu > 0) {
            out.p_plus = p;
            out.rho_plus = conditional;
        } else {
            out.p_minus = p;
            out.rho_minus = conditional;
        }
    }
    return out;
}

} // namespace qumi::measurement
