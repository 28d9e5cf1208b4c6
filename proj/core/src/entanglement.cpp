#include "lzd/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lzd/dynamics.hpp"
#include "lzd/generator.hpp"

namespace lzd {

namespace {

const std::array<Mat4, 16>& pauli_products() {
    static const std::array<Mat4, 16> table = [] {
        std::array<Mat4, 16> t;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) t[4 * i + j] = kron(pauli::by_index(i), pauli::by_index(j));
        return t;
    }();
    return table;
}

double expectation(const Mat4& op, const Mat4& rho) {
    // Tr(op rho) for Hermitian op
    cplx acc = 0.0;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) acc += op(r, c) * rho(c, r);
    return acc.real();
}

double negativity_from_spectrum(const std::array<double, 4>& mu) {
    double n = 0.0;
    for (double m : mu) n += std::abs(m) - m;
    return 0.5 * n;
}

}  // namespace

Mat4 assemble_density(const PauliState& st) {
    const auto& p = pauli_products();
    Mat4 rho = p[0];
    for (int i = 1; i <= 3; ++i) {
        rho += st.s[i - 1] * p[4 * i];
        rho += st.r[i - 1] * p[i];
        for (int j = 1; j <= 3; ++j) rho += st.chi[i - 1][j - 1] * p[4 * i + j];
    }
    rho *= cplx(0.25);
    return rho;
}

PauliState pauli_project(const Mat4& rho) {
    const auto& p = pauli_products();
    PauliState st;
    for (int i = 1; i <= 3; ++i) {
        st.s[i - 1] = expectation(p[4 * i], rho);
        st.r[i - 1] = expectation(p[i], rho);
        for (int j = 1; j <= 3; ++j) st.chi[i - 1][j - 1] = expectation(p[4 * i + j], rho);
    }
    return st;
}

NegativityResult negativity(const Mat4& rho, const DensityTolerance& tol) {
    require_density_matrix(rho, tol.trace, tol.eigenvalue);
    NegativityResult out;
    out.pt_eigenvalues = hermitian_eigenvalues(partial_transpose_second(rho));
    out.value = negativity_from_spectrum(out.pt_eigenvalues);
    out.method = NegativityMethod::general_eigensolver;
    return out;
}

bool is_x_state(const PauliState& st, double tol) {
    const auto& c = st.chi;
    const double excluded[] = {st.s[0], st.s[1], st.r[0], st.r[1], c[0][2], c[1][2], c[2][0], c[2][1]};
    for (double x : excluded)
        if (std::abs(x) > tol) return false;
    return std::abs(c[1][0] - c[0][1]) <= tol && std::abs(c[1][1] + c[0][0]) <= tol;
}

std::array<double, 4> xstate_pt_eigenvalues(const PauliState& st, double tol) {
    if (!is_x_state(st, tol)) throw precondition_error("xstate_pt_eigenvalues: state is not in X form", tol);
    const auto& c = st.chi;
    const double s3 = st.s[2];
    const double r3 = st.r[2];
    const double chi33 = c[2][2];
    const double root12 = std::sqrt(4.0 * (c[0][0] * c[0][0] + c[0][1] * c[0][1]) + (s3 - r3) * (s3 - r3));
    const double root34 = std::abs(s3 + r3);
    std::array<double, 4> mu{0.25 * (1.0 - chi33 + root12), 0.25 * (1.0 - chi33 - root12),
                             0.25 * (1.0 + chi33 + root34), 0.25 * (1.0 + chi33 - root34)};
    std::sort(mu.begin(), mu.end());
    return mu;
}

NegativityResult negativity(const PauliState& st, NegativityMethod preferred, const DensityTolerance& tol) {
    if (preferred == NegativityMethod::x_state_closed_form && is_x_state(st)) {
        NegativityResult out;
        out.pt_eigenvalues = xstate_pt_eigenvalues(st);
        out.value = negativity_from_spectrum(out.pt_eigenvalues);
        out.method = NegativityMethod::x_state_closed_form;
        return out;
    }
    return negativity(assemble_density(st), tol);
}

SlowDecayLaw negativity_slow_T0(double t, double t_int, const LZParams& p, const BathParams& b, double eta) {
    if (b.temperature != 0.0) throw std::invalid_argument("negativity_slow_T0: requires zero temperature");
    const GeneratorCoefficients c = slow_limit_coefficients(p, b);
    const SlowSolution sol = evolve_slow_analytic(schmidt_initial(eta), t_int, t, p, b);

    SlowDecayLaw law;
    law.value = negativity(sol.state, NegativityMethod::x_state_closed_form).value;
    law.rate = 2.0 * c.a_plus;
    const double lam2 = b.coupling * b.coupling;
    law.printed_rate = lam2 * std::numbers::pi * spectral_density(2.0 * p.delta, b) * std::pow(std::cos(b.angle), 2);
    law.printed_value = 0.5 * std::exp(-(t - t_int) * law.printed_rate);
    law.rates_differ = std::abs(law.rate - law.printed_rate) > 1e-12 * std::max(law.rate, law.printed_rate);
    return law;
}

double survival_xi(double nbar) {
    if (!(nbar >= 0.0)) throw std::invalid_argument("survival_xi: occupation must be non-negative");
    if (nbar == 0.0) return 0.0;
    const double m = 2.0 * nbar + 1.0;
    // (3 - l^2) / (1 - l^2) with l = 1/m, written without the 1 - l^2 cancellation
    const double a = (3.0 * m * m - 1.0) / (4.0 * nbar * (nbar + 1.0));
    return 1.0 / (a * (1.0 + std::sqrt(1.0 - 1.0 / (a * a))));
}

double survival_time(const BathParams& b, const LZParams& p) {
    if (b.angle != 0.0) throw std::invalid_argument("survival_time: only longitudinal coupling (theta = 0)");
    if (b.temperature == 0.0) return std::numeric_limits<double>::infinity();
    const double xi = survival_xi(mean_occupation(2.0 * p.delta, b.temperature));
    if (xi <= 0.0) return std::numeric_limits<double>::infinity();
    const GeneratorCoefficients c = slow_limit_coefficients(p, b);
    return -std::log(xi) / (2.0 * c.b);
}

}  // namespace lzd
