#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <variant>

#include "qumi/errors.hpp"
#include "qumi/linalg.hpp"

// Two-qubit density matrices: validation, Pauli-basis decomposition and the
// named state families. Basis ordering is |++>, |+->, |-+>, |--> with
// subsystem A as the outer (slow) index and "+" the spin-up (sigma_z = +1)
// level.
namespace qumi::states {

using linalg::Complex;
using linalg::Matrix2;
using linalg::Matrix4;
using linalg::RealMatrix3;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;  // min eigenvalue >= -kPsdTol
inline constexpr double kUnitTol = 1e-12;
inline constexpr double kDefaultBlochZeroThreshold = 1e-9;

inline double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

inline double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Unit vector on the Bloch sphere; a measurement axis.
struct Direction {
    double x, y, z;

    Direction(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
        const double n2 = x * x + y * y + z * z;
        if (std::abs(n2 - 1.0) > 2.0 * kUnitTol) {
            std::ostringstream os;
            os << "direction must be unit length, |n|^2 = " << n2;
            throw Error(ErrorKind::ParamOutOfRange, os.str());
        }
    }

    static Direction normalized(double x_, double y_, double z_) {
        const double n = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
        if (n < 1e-150) throw Error(ErrorKind::ZeroVector, "cannot normalize a zero 3-vector");
        return Direction(x_ / n, y_ / n, z_ / n);
    }

    static Direction normalized(const std::array<double, 3>& v) {
        return normalized(v[0], v[1], v[2]);
    }

    std::array<double, 3> as_array() const { return {x, y, z}; }

    Direction operator-() const { return Direction(-x, -y, -z); }
};

inline double dot(const Direction& a, const Direction& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Angle between the axes spanned by a and b (antipodes identified).
inline double axis_angle(const Direction& a, const Direction& b) {
    const double c = std::min(1.0, std::abs(dot(a, b)));
    return std::acos(c);
}

/// Validated 4x4 Hermitian, unit-trace, positive-semidefinite matrix.
class DensityMatrix2Q {
public:
    static DensityMatrix2Q validate(const Matrix4& m) {
        const double herm = linalg::hermiticity_error(m);
        if (herm > kHermitianTol) {
            std::ostringstream os;
            os << "max |M - M^dagger| = " << herm;
            throw Error(ErrorKind::NotHermitian, os.str());
        }
        const Complex tr = m.trace();
        if (std::abs(tr - 1.0) > kTraceTol) {
            std::ostringstream os;
            os << "trace = " << tr.real();
            throw Error(ErrorKind::TraceNotOne, os.str());
        }
        const auto es = linalg::hermitian_eigensystem(m);
        if (es.values[0] < -kPsdTol) {
            std::ostringstream os;
            os << "min eigenvalue " << es.values[0];
            throw Error(ErrorKind::NotPositive, os.str());
        }
        return DensityMatrix2Q(m, es.values[0]);
    }

    const Matrix4& matrix() const { return m_; }
    double min_eigenvalue() const { return min_eigenvalue_; }

private:
    DensityMatrix2Q(const Matrix4& m, double min_eig) : m_(m), min_eigenvalue_(min_eig) {}

    Matrix4 m_;
    double min_eigenvalue_;
};

/// Bloch vectors <S^A>, <S^B> (each of length <= 1/2) and the 3x3
/// correlation matrix C_ij = <sigma_i x sigma_j>.
struct PauliDecomposition {
    std::array<double, 3> bloch_a{};
    std::array<double, 3> bloch_b{};
    RealMatrix3 corr{};
};

namespace detail {

inline Matrix4 pauli_on_a(int i) { return linalg::kron(linalg::pauli(i), linalg::identity2()); }
inline Matrix4 pauli_on_b(int j) { return linalg::kron(linalg::identity2(), linalg::pauli(j)); }
inline Matrix4 pauli_pair(int i, int j) { return linalg::kron(linalg::pauli(i), linalg::pauli(j)); }

inline double real_expectation(const Matrix4& op, const Matrix4& rho) {
    return linalg::trace_product(op, rho).real();
}

} // namespace detail

inline PauliDecomposition pauli_decompose(const DensityMatrix2Q& rho) {
    PauliDecomposition d;
    const Matrix4& m = rho.matrix();
    for (int i = 0; i < 3; ++i) {
        d.bloch_a[i] = 0.5 * detail::real_expectation(detail::pauli_on_a(i), m);
        d.bloch_b[i] = 0.5 * detail::real_expectation(detail::pauli_on_b(i), m);
        for (int j = 0; j < 3; ++j)
            d.corr(i, j) = detail::real_expectation(detail::pauli_pair(i, j), m);
    }
    return d;
}

/// Matrix realization of a decomposition, before positivity is known.
inline Matrix4 matrix_from_pauli(const PauliDecomposition& d) {
    Matrix4 m = 0.25 * Matrix4::identity();
    for (int i = 0; i < 3; ++i) {
        m = m + (0.5 * d.bloch_a[i]) * detail::pauli_on_a(i);
        m = m + (0.5 * d.bloch_b[i]) * detail::pauli_on_b(i);
        for (int j = 0; j < 3; ++j)
            m = m + (0.25 * d.corr(i, j)) * detail::pauli_pair(i, j);
    }
    return m;
}

inline DensityMatrix2Q from_pauli(const PauliDecomposition& d) {
    return DensityMatrix2Q::validate(matrix_from_pauli(d));
}

/// Spectrum of the Bell-diagonal state with correlation diag(f1,f2,f3),
/// one eigenvalue per Bell state.
inline std::array<double, 4> bell_diagonal_eigenvalues(double f1, double f2, double f3) {
    return {
        0.25 * (1.0 - f1 - f2 - f3),
        0.25 * (1.0 - f1 + f2 + f3),
        0.25 * (1.0 + f1 - f2 + f3),
        0.25 * (1.0 + f1 + f2 - f3),
    };
}

inline DensityMatrix2Q bell_diagonal(double f1, double f2, double f3) {
    const auto lambdas = bell_diagonal_eigenvalues(f1, f2, f3);
    for (double lam : lambdas) {
        if (lam < -kPsdTol) {
            std::ostringstream os;
            os << "Bell-diagonal eigenvalue " << lam << " for (f1,f2,f3) = (" << f1 << "," << f2
               << "," << f3 << ")";
            throw Error(ErrorKind::NotPositive, os.str());
        }
    }
    PauliDecomposition d;
    d.corr = RealMatrix3::diagonal(f1, f2, f3);
    return from_pauli(d);
}

inline DensityMatrix2Q x_state(double c1, double c2, double c3, double r, double s) {
    PauliDecomposition d;
    d.corr = RealMatrix3::diagonal(c1, c2, c3);
    d.bloch_a = {0.0, 0.0, 0.5 * r};
    d.bloch_b = {0.0, 0.0, 0.5 * s};
    return from_pauli(d);
}

/// p * (singlet projector) + (1-p) * I/4.
inline DensityMatrix2Q werner(double p) {
    if (p < 0.0 || p > 1.0) {
        std::ostringstream os;
        os << "werner parameter p = " << p << " outside [0, 1]";
        throw Error(ErrorKind::ParamOutOfRange, os.str());
    }
    Matrix4 singlet;
    singlet(1, 1) = 0.5;
    singlet(2, 2) = 0.5;
    singlet(1, 2) = -0.5;
    singlet(2, 1) = -0.5;
    const Matrix4 m = p * singlet + (0.25 * (1.0 - p)) * Matrix4::identity();
    return DensityMatrix2Q::validate(m);
}

inline DensityMatrix2Q pure_state(const std::array<Complex, 4>& amplitudes) {
    double norm2 = 0.0;
    for (const auto& amp : amplitudes) norm2 += std::norm(amp);
    if (norm2 < 1e-24) throw Error(ErrorKind::ZeroVector, "pure-state amplitudes are all zero");
    Matrix4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / norm2;
    return DensityMatrix2Q::validate(m);
}

/// Bloch vector <S> of a single-qubit density matrix.
inline std::array<double, 3> bloch_vector(const Matrix2& rho_single) {
    const double herm = linalg::hermiticity_error(rho_single);
    if (herm > kHermitianTol) {
        std::ostringstream os;
        os << "max |M - M^dagger| = " << herm;
        throw Error(ErrorKind::NotHermitian, os.str());
    }
    if (std::abs(rho_single.trace() - 1.0) > kTraceTol) {
        std::ostringstream os;
        os << "trace = " << rho_single.trace().real();
        throw Error(ErrorKind::TraceNotOne, os.str());
    }
    const auto es = linalg::hermitian_eigensystem(rho_single);
    if (es.values[0] < -kPsdTol) {
        std::ostringstream os;
        os << "min eigenvalue " << es.values[0];
        throw Error(ErrorKind::NotPositive, os.str());
    }
    std::array<double, 3> b;
    for (int i = 0; i < 3; ++i)
        b[i] = 0.5 * linalg::trace_product(linalg::pauli(i), rho_single).real();
    return b;
}

// State-family parameter bundles; realization validates physicality.
struct BellDiagonalParams {
    double f1, f2, f3;
};

struct XStateParams {
    double c1, c2, c3, r, s;
};

struct WernerParams {
    double p;
};

struct PureParams {
    std::array<Complex, 4> amplitudes;
};

using StateFamilyParams = std::variant<BellDiagonalParams, XStateParams, WernerParams, PureParams>;

inline DensityMatrix2Q make_state(const StateFamilyParams& params) {
    return std::visit(
        [](const auto& p) -> DensityMatrix2Q {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BellDiagonalParams>)
                return bell_diagonal(p.f1, p.f2, p.f3);
            else if constexpr (std::is_same_v<T, XStateParams>)
                return x_state(p.c1, p.c2, p.c3, p.r, p.s);
            else if constexpr (std::is_same_v<T, WernerParams>)
                return werner(p.p);
            else
                return pure_state(p.amplitudes);
        },
        params);
}

} // namespace qumi::states
