#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>

#include "qumi/errors.hpp"

// Dense complex linear algebra for the 2x2 / 4x4 Hermitian matrices this
// project lives on, plus 3x3 real singular values. Deliberately minimal:
// fixed sizes, value semantics, no allocation.
namespace qumi::linalg {

using Complex = std::complex<double>;

template <int N>
struct ComplexMatrix {
    static_assert(N >= 2 && N <= 4);
    static constexpr int dim = N;

    std::array<Complex, static_cast<std::size_t>(N) * N> e{};

    Complex& operator()(int i, int j) { return e[static_cast<std::size_t>(i) * N + j]; }
    const Complex& operator()(int i, int j) const { return e[static_cast<std::size_t>(i) * N + j]; }

    static ComplexMatrix identity() {
        ComplexMatrix m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix zero() { return ComplexMatrix{}; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) out(i, j) = std::conj((*this)(j, i));
        return out;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (int i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }
};

using Matrix2 = ComplexMatrix<2>;
using Matrix3 = ComplexMatrix<3>;
using Matrix4 = ComplexMatrix<4>;

template <int N>
ComplexMatrix<N> operator+(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b) {
    ComplexMatrix<N> out;
    for (std::size_t k = 0; k < a.e.size(); ++k) out.e[k] = a.e[k] + b.e[k];
    return out;
}

template <int N>
ComplexMatrix<N> operator-(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b) {
    ComplexMatrix<N> out;
    for (std::size_t k = 0; k < a.e.size(); ++k) out.e[k] = a.e[k] - b.e[k];
    return out;
}

template <int N>
ComplexMatrix<N> operator*(Complex scale, const ComplexMatrix<N>& m) {
    ComplexMatrix<N> out;
    for (std::size_t k = 0; k < m.e.size(); ++k) out.e[k] = scale * m.e[k];
    return out;
}

template <int N>
ComplexMatrix<N> operator*(double scale, const ComplexMatrix<N>& m) {
    return Complex(scale, 0.0) * m;
}

template <int N>
ComplexMatrix<N> operator*(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b) {
    ComplexMatrix<N> out;
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (int j = 0; j < N; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

template <int N>
double max_abs_diff(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.e.size(); ++k) worst = std::max(worst, std::abs(a.e[k] - b.e[k]));
    return worst;
}

/// Tr(a * b) without forming the product.
template <int N>
Complex trace_product(const ComplexMatrix<N>& a, const ComplexMatrix<N>& b) {
    Complex t = 0.0;
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) t += a(i, k) * b(k, i);
    return t;
}

template <int N>
double hermiticity_error(const ComplexMatrix<N>& m) {
    double worst = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    return worst;
}

struct RealMatrix3 {
    std::array<double, 9> e{};

    double& operator()(int i, int j) { return e[static_cast<std::size_t>(i) * 3 + j]; }
    const double& operator()(int i, int j) const { return e[static_cast<std::size_t>(i) * 3 + j]; }

    static RealMatrix3 identity() {
        RealMatrix3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }

    static RealMatrix3 diagonal(double d0, double d1, double d2) {
        RealMatrix3 m;
        m(0, 0) = d0;
        m(1, 1) = d1;
        m(2, 2) = d2;
        return m;
    }
};

inline std::array<double, 3> multiply(const RealMatrix3& m, const std::array<double, 3>& v) {
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i] += m(i, j) * v[j];
    return out;
}

// Pauli matrices and the 2x2 identity, the operator alphabet of the project.
inline Matrix2 identity2() { return Matrix2::identity(); }

inline Matrix2 pauli_x() {
    Matrix2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

inline Matrix2 pauli_y() {
    Matrix2 m;
    m(0, 1) = Complex(0.0, -1.0);
    m(1, 0) = Complex(0.0, 1.0);
    return m;
}

inline Matrix2 pauli_z() {
    Matrix2 m;
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

inline Matrix2 pauli(int i) {
    switch (i) {
        case 0: return pauli_x();
        case 1: return pauli_y();
        case 2: return pauli_z();
        default: throw Error(ErrorKind::ParamOutOfRange, "pauli index must be 0, 1 or 2");
    }
}

template <int N>
struct Eigensystem {
    std::array<double, N> values;  // ascending
    ComplexMatrix<N> vectors;      // column k pairs with values[k]
};

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kJacobiOffTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

template <int N>
double off_diagonal_norm(const ComplexMatrix<N>& m) {
    double sum = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j) sum += std::norm(m(i, j));
    return std::sqrt(sum);
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Eigenvalues ascending, eigenvectors orthonormal columns.
template <int N>
Eigensystem<N> hermitian_eigensystem(const ComplexMatrix<N>& input) {
    const double herm_err = hermiticity_error(input);
    if (herm_err > kHermitianTolerance) {
        std::ostringstream os;
        os << "max |M - M^dagger| = " << herm_err;
        throw Error(ErrorKind::NotHermitian, os.str());
    }

    // Hermitize exactly so round-off asymmetry cannot leak into the sweep.
    ComplexMatrix<N> a;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));
    ComplexMatrix<N> v = ComplexMatrix<N>::identity();

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) < kJacobiOffTolerance) break;
        for (int p = 0; p < N - 1; ++p) {
            for (int q = p + 1; q < N; ++q) {
                const double apq_abs = std::abs(a(p, q));
                if (apq_abs < 1e-300) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const Complex phase = a(p, q) / apq_abs;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * apq_abs);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Unitary J acts on the (p,q) plane: absorb the phase of the
                // pivot, then rotate by the angle that annihilates it.
                const Complex jp = -s * std::conj(phase);
                const Complex jq = c * std::conj(phase);
                for (int k = 0; k < N; ++k) {
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp + jp * akq;
                    a(k, q) = s * akp + jq * akq;
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp + jp * vkq;
                    v(k, q) = s * vkp + jq * vkq;
                }
                for (int k = 0; k < N; ++k) {
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * phase * aqk;
                    a(q, k) = s * apk + c * phase * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);
            }
        }
    }

    std::array<int, N> order;
    for (int k = 0; k < N; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](int lhs, int rhs) { return a(lhs, lhs).real() < a(rhs, rhs).real(); });

    Eigensystem<N> out;
    for (int k = 0; k < N; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (int row = 0; row < N; ++row) out.vectors(row, k) = v(row, order[k]);
    }
    return out;
}

/// Singular values of a real 3x3 matrix, descending: square roots of the
/// eigenvalues of W^T W, negative round-off clipped to zero.
inline std::array<double, 3> singular_values_3x3(const RealMatrix3& w) {
    Matrix3 gram;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double sum = 0.0;
            for (int k = 0; k < 3; ++k) sum += w(k, i) * w(k, j);
            gram(i, j) = sum;
        }
    const auto es = hermitian_eigensystem(gram);
    std::array<double, 3> out;
    for (int k = 0; k < 3; ++k) out[k] = std::sqrt(std::max(0.0, es.values[2 - k]));
    return out;
}

struct SingularTriplet {
    double value;
    std::array<double, 3> left;   // u with W v = s u
    std::array<double, 3> right;  // v
};

/// Largest singular value of W with its singular vector pair. For
/// numerically zero W the vectors default to e3.
inline SingularTriplet top_singular_triplet_3x3(const RealMatrix3& w) {
    Matrix3 gram;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double sum = 0.0;
            for (int k = 0; k < 3; ++k) sum += w(k, i) * w(k, j);
            gram(i, j) = sum;
        }
    const auto es = hermitian_eigensystem(gram);
    SingularTriplet out;
    out.value = std::sqrt(std::max(0.0, es.values[2]));
    out.left = {0.0, 0.0, 1.0};
    out.right = {0.0, 0.0, 1.0};
    if (out.value < 1e-12) return out;

    std::array<double, 3> v;
    double vnorm = 0.0;
    for (int k = 0; k < 3; ++k) {
        v[k] = es.vectors(k, 2).real();  // real input keeps real eigenvectors
        vnorm += v[k] * v[k];
    }
    vnorm = std::sqrt(vnorm);
    for (auto& c : v) c /= vnorm;

    std::array<double, 3> u = multiply(w, v);
    double unorm = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    for (auto& c : u) c /= unorm;
    out.left = u;
    out.right = v;
    return out;
}

/// Tensor product with subsystem A as the outer (slow) index.
inline Matrix4 kron(const Matrix2& a, const Matrix2& b) {
    Matrix4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return out;
}

enum class Subsystem { A, B };

/// Reduced 2x2 matrix after tracing out the other subsystem.
inline Matrix2 partial_trace(const Matrix4& m, Subsystem keep) {
    Matrix2 out;
    if (keep == Subsystem::A) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Complex sum = 0.0;
                for (int k = 0; k < 2; ++k) sum += m(2 * i + k, 2 * j + k);
                out(i, j) = sum;
            }
    } else {
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                Complex sum = 0.0;
                for (int i = 0; i < 2; ++i) sum += m(2 * i + k, 2 * i + l);
                out(k, l) = sum;
            }
    }
    return out;
}

} // namespace qumi::linalg
