// linalg.hpp: small dense complex matrices (2x2 and 4x4) for qubit work

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace lzd {

using cplx = std::complex<double>;

/// Fixed-size dense complex square matrix, row-major.
template <std::size_t N>
struct Matrix {
    static constexpr std::size_t dim = N;
    std::array<cplx, N * N> data{};

    cplx& operator()(std::size_t r, std::size_t c) { return data[r * N + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * N + c]; }

    static Matrix zero() { return Matrix{}; }
    static Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    Matrix adjoint() const {
        Matrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) m(r, c) = std::conj((*this)(c, r));
        return m;
    }

    Matrix transpose() const {
        Matrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) m(r, c) = (*this)(c, r);
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) data[i] += o.data[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) data[i] -= o.data[i];
        return *this;
    }
    Matrix& operator*=(cplx s) {
        for (auto& x : data) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= cplx(s); }
    friend Matrix operator*(Matrix a, double s) { return a *= cplx(s); }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t k = 0; k < N; ++k) {
                const cplx ark = a(r, k);
                if (ark == cplx(0.0)) continue;
                for (std::size_t c = 0; c < N; ++c) m(r, c) += ark * b(k, c);
            }
        return m;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

using Mat2 = Matrix<2>;
using Mat4 = Matrix<4>;

/// Kronecker product; the first factor indexes the slow (outer) block.
template <std::size_t A, std::size_t B>
Matrix<A * B> kron(const Matrix<A>& a, const Matrix<B>& b) {
    Matrix<A * B> m;
    for (std::size_t i = 0; i < A; ++i)
        for (std::size_t j = 0; j < A; ++j)
            for (std::size_t k = 0; k < B; ++k)
                for (std::size_t l = 0; l < B; ++l) m(i * B + k, j * B + l) = a(i, j) * b(k, l);
    return m;
}

template <std::size_t N>
Matrix<N> commutator(const Matrix<N>& a, const Matrix<N>& b) {
    return a * b - b * a;
}

template <std::size_t N>
Matrix<N> anticommutator(const Matrix<N>& a, const Matrix<N>& b) {
    return a * b + b * a;
}

template <std::size_t N>
double frobenius_norm(const Matrix<N>& m) {
    double s = 0.0;
    for (const auto& x : m.data) s += std::norm(x);
    return std::sqrt(s);
}

/// max_ij |m_ij - conj(m_ji)|
template <std::size_t N>
double hermiticity_defect(const Matrix<N>& m) {
    double d = 0.0;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = r; c < N; ++c) d = std::max(d, std::abs(m(r, c) - std::conj(m(c, r))));
    return d;
}

/// (M + M^dagger) / 2
template <std::size_t N>
Matrix<N> hermitize(const Matrix<N>& m) {
    return 0.5 * (m + m.adjoint());
}

template <std::size_t N>
double max_abs_difference(const Matrix<N>& a, const Matrix<N>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < N * N; ++i) d = std::max(d, std::abs(a.data[i] - b.data[i]));
    return d;
}

namespace pauli {
Mat2 id();
Mat2 x();
Mat2 y();
Mat2 z();
/// sigma_+ = (sigma_x + i sigma_y) / 2 = |0><1|
Mat2 raising();
/// sigma_- = (sigma_x - i sigma_y) / 2 = |1><0|
Mat2 lowering();
/// index 0 is the identity, 1..3 are x, y, z
Mat2 by_index(int i);
}  // namespace pauli

/// Thrown when an input violates a numerical precondition (Hermiticity, trace...).
class precondition_error : public std::invalid_argument {
public:
    precondition_error(const std::string& what, double diagnostic)
        : std::invalid_argument(what + " (diagnostic " + std::to_string(diagnostic) + ")"),
          diagnostic_(diagnostic) {}
    double diagnostic() const noexcept { return diagnostic_; }

private:
    double diagnostic_;
};

inline constexpr double hermitian_tolerance = 1e-12;

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Cyclic Jacobi sweeps on the real-symmetric 2N x 2N embedding
/// [[Re M, -Im M], [Im M, Re M]], whose spectrum is that of M with every
/// eigenvalue doubled. Input within `tolerance` of Hermitian is symmetrized
/// first; anything further off is rejected with the defect as diagnostic.
template <std::size_t N>
std::array<double, N> hermitian_eigenvalues(const Matrix<N>& m, double tolerance = hermitian_tolerance);

extern template std::array<double, 2> hermitian_eigenvalues<2>(const Matrix<2>&, double);
extern template std::array<double, 4> hermitian_eigenvalues<4>(const Matrix<4>&, double);

/// Cholesky test; only the lower triangle of the (assumed Hermitian) input is read.
template <std::size_t N>
bool is_positive_definite(const Matrix<N>& m) {
    Matrix<N> l;
    for (std::size_t j = 0; j < N; ++j) {
        double d = m(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < N; ++i) {
            cplx acc = m(i, j);
            for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * std::conj(l(j, k));
            l(i, j) = acc / ljj;
        }
    }
    return true;
}

/// Transpose on the second tensor factor of a two-qubit operator.
Mat4 partial_transpose_second(const Mat4& m);
/// Transpose on the first tensor factor of a two-qubit operator.
Mat4 partial_transpose_first(const Mat4& m);

inline constexpr double density_trace_tolerance = 1e-10;
inline constexpr double density_eigenvalue_tolerance = 1e-8;

/// Throws precondition_error unless m is Hermitian, unit-trace and positive
/// semidefinite within the density tolerances.
void require_density_matrix(const Mat4& m, double trace_tol = density_trace_tolerance,
                            double eig_tol = density_eigenvalue_tolerance);

bool is_density_matrix(const Mat4& m, double trace_tol = density_trace_tolerance,
                       double eig_tol = density_eigenvalue_tolerance);

}  // namespace lzd
