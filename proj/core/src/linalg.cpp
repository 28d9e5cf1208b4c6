#include "lzd/linalg.hpp"

#include <algorithm>

namespace lzd {

namespace pauli {
Mat2 id() { return Mat2::identity(); }

Mat2 x() {
    Mat2 m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Mat2 y() {
    Mat2 m;
    m(0, 1) = cplx(0.0, -1.0);
    m(1, 0) = cplx(0.0, 1.0);
    return m;
}

Mat2 z() {
    Mat2 m;
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

Mat2 raising() {
    Mat2 m;
    m(0, 1) = 1.0;
    return m;
}

Mat2 lowering() {
    Mat2 m;
    m(1, 0) = 1.0;
    return m;
}

Mat2 by_index(int i) {
    switch (i) {
        case 0: return id();
        case 1: return x();
        case 2: return y();
        case 3: return z();
        default: throw std::out_of_range("pauli index must be in 0..3");
    }
}
}  // namespace pauli

namespace {

constexpr double jacobi_off_tolerance = 1e-13;
constexpr int jacobi_max_sweeps = 100;

template <std::size_t M>
double off_diagonal_norm(const std::array<std::array<double, M>, M>& a) {
    double s = 0.0;
    for (std::size_t p = 0; p < M; ++p)
        for (std::size_t q = 0; q < M; ++q)
            if (p != q) s += a[p][q] * a[p][q];
    return std::sqrt(s);
}

// Classical cyclic Jacobi on a real symmetric matrix; eigenvalues only.
template <std::size_t M>
std::array<double, M> jacobi_symmetric(std::array<std::array<double, M>, M> a) {
    double scale = 0.0;
    for (const auto& row : a)
        for (double v : row) scale += v * v;
    const double threshold = jacobi_off_tolerance * std::max(1.0, std::sqrt(scale));

    for (int sweep = 0; sweep < jacobi_max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) < threshold) break;
        for (std::size_t p = 0; p + 1 < M; ++p) {
            for (std::size_t q = p + 1; q < M; ++q) {
                const double apq = a[p][q];
                if (apq == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < M; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < M; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    std::array<double, M> ev{};
    for (std::size_t i = 0; i < M; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace

template <std::size_t N>
std::array<double, N> hermitian_eigenvalues(const Matrix<N>& m, double tolerance) {
    const double defect = hermiticity_defect(m);
    if (!(defect <= tolerance)) throw precondition_error("hermitian_eigenvalues: matrix is not Hermitian", defect);
    const Matrix<N> h = hermitize(m);

    constexpr std::size_t M = 2 * N;
    std::array<std::array<double, M>, M> embed{};
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) {
            const double re = h(r, c).real();
            const double im = h(r, c).imag();
            embed[r][c] = re;
            embed[r + N][c + N] = re;
            embed[r][c + N] = -im;
            embed[r + N][c] = im;
        }
    const auto doubled = jacobi_symmetric<M>(embed);

    // Each eigenvalue of h appears twice; average the pair.
    std::array<double, N> ev{};
    for (std::size_t i = 0; i < N; ++i) ev[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    return ev;
}

template std::array<double, 2> hermitian_eigenvalues<2>(const Matrix<2>&, double);
template std::array<double, 4> hermitian_eigenvalues<4>(const Matrix<4>&, double);

Mat4 partial_transpose_second(const Mat4& m) {
    Mat4 out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) out(2 * i + a, 2 * j + b) = m(2 * i + b, 2 * j + a);
    return out;
}

Mat4 partial_transpose_first(const Mat4& m) {
    Mat4 out;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) out(2 * i + a, 2 * j + b) = m(2 * j + a, 2 * i + b);
    return out;
}

void require_density_matrix(const Mat4& m, double trace_tol, double eig_tol) {
    const double defect = hermiticity_defect(m);
    if (!(defect <= hermitian_tolerance)) throw precondition_error("density matrix is not Hermitian", defect);
    const double trace_err = std::abs(m.trace() - cplx(1.0));
    if (!(trace_err <= trace_tol)) throw precondition_error("density matrix trace differs from 1", trace_err);
    const double min_ev = hermitian_eigenvalues(m)[0];
    if (!(min_ev >= -eig_tol)) throw precondition_error("density matrix has a negative eigenvalue", min_ev);
}

bool is_density_matrix(const Mat4& m, double trace_tol, double eig_tol) {
    try {
        require_density_matrix(m, trace_tol, eig_tol);
        return true;
    } catch (const precondition_error&) {
        return false;
    }
}

}  // namespace lzd
