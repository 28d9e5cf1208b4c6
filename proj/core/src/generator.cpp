#include "lzd/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lzd {

namespace {

double lamb_difference_direct(double omega, const BathParams& b) {
    return lamb_shift_coefficient(2.0 * omega, b).value - lamb_shift_coefficient(-2.0 * omega, b).value;
}

GeneratorCoefficients assemble(double omega, double phi, double phi_dot, double lamb_difference,
                               const BathParams& b) {
    const double lam2 = b.coupling * b.coupling;
    const double sin2 = std::pow(std::sin(b.angle - 2.0 * phi), 2);
    const double cos2 = std::pow(std::cos(b.angle - 2.0 * phi), 2);
    const double k = omega + 0.5 * lam2 * sin2 * lamb_difference;
    const double f = 0.25 * lam2 * sin2 * kossakowski_rate(2.0 * omega, b);
    const double g = 0.25 * lam2 * sin2 * kossakowski_rate(-2.0 * omega, b);
    const double l = 0.25 * lam2 * cos2 * kossakowski_rate(0.0, b);
    return make_coefficients(k, f, g, l, phi_dot);
}

}  // namespace

GeneratorCoefficients make_coefficients(double k, double f, double g, double l, double phi_dot) {
    GeneratorCoefficients c;
    c.k = k;
    c.f = f;
    c.g = g;
    c.l = l;
    c.a_plus = 0.5 * (f + g);
    c.a_minus = 0.5 * (f - g);
    c.b = c.a_plus + 2.0 * l;
    c.phi_dot = phi_dot;
    return c;
}

GeneratorCoefficients coefficients(double t, const LZParams& p, const BathParams& b) {
    const double omega = gap(t, p);
    const double lamb = b.lamb_shift_enabled ? lamb_difference_direct(omega, b) : 0.0;
    return assemble(omega, mixing_angle(t, p), mixing_angle_rate(t, p), lamb, b);
}

GeneratorCoefficients slow_limit_coefficients(const LZParams& p, const BathParams& b) {
    const double lamb = b.lamb_shift_enabled ? lamb_difference_direct(p.delta, b) : 0.0;
    return assemble(p.delta, 0.25 * std::numbers::pi, 0.0, lamb, b);
}

BlochGenerator bloch_matrix(const GeneratorCoefficients& c) {
    BlochGenerator out;
    out.Q = {{{-c.b, -2.0 * c.k, -2.0 * c.phi_dot}, {2.0 * c.k, -c.b, 0.0}, {2.0 * c.phi_dot, 0.0, -2.0 * c.a_plus}}};
    out.q = {0.0, 0.0, -2.0 * c.a_minus};
    return out;
}

BlochGenerator bloch_matrix(double t, const LZParams& p, const BathParams& b) {
    return bloch_matrix(coefficients(t, p, b));
}

Mat2 apply_generator(const Mat2& rho, const GeneratorCoefficients& c) {
    static const Mat2 sz = pauli::z();
    static const Mat2 sy = pauli::y();
    static const Mat2 sp = pauli::raising();
    static const Mat2 sm = pauli::lowering();
    static const Mat2 sp_sm = sp * sm;
    static const Mat2 sm_sp = sm * sp;
    const cplx minus_i(0.0, -1.0);

    const Mat2 h = c.k * sz - c.phi_dot * sy;
    Mat2 out = minus_i * commutator(h, rho);
    out += c.f * (sm * rho * sp - 0.5 * anticommutator(sp_sm, rho));
    out += c.g * (sp * rho * sm - 0.5 * anticommutator(sm_sp, rho));
    out += c.l * (sz * rho * sz - rho);
    return out;
}

Mat2 apply_generator(const Mat2& rho, double t, const LZParams& p, const BathParams& b) {
    return apply_generator(rho, coefficients(t, p, b));
}

TimescaleReport timescales(double t, const LZParams& p, const BathParams& b, double threshold) {
    TimescaleReport r;
    const double omega = gap(t, p);
    r.tau_s = 1.0 / (2.0 * omega);
    const double relax_rate = kossakowski_rate(2.0 * omega, b);
    r.tau_r = relax_rate > 0.0 ? 1.0 / relax_rate : std::numeric_limits<double>::infinity();

    const double seam = p.delta / p.v;
    const double early = 2.0 * omega * omega / (p.v * p.delta);
    const double late = omega * omega / (p.v * p.v * t);
    if (std::abs(t - seam) <= 0.01 * seam)
        r.tau_a = std::min(early, late);
    else
        r.tau_a = t <= seam ? early : late;

    r.margin = std::min(r.tau_r, r.tau_a) / r.tau_s;
    r.secular_ok = r.margin >= threshold;
    return r;
}

namespace {
constexpr int lamb_table_nodes = 513;
}

GeneratorModel::GeneratorModel(const LZParams& p, const BathParams& b, double t_min, double t_max)
    : lz_(p), bath_(b) {
    lz_.validate();
    bath_.validate();
    if (!bath_.lamb_shift_enabled) return;

    const double omega_lo = p.delta;
    const double omega_hi = gap(std::max(std::abs(t_min), std::abs(t_max)), p);
    log_lo_ = std::log(omega_lo);
    const double span = std::log(omega_hi) - log_lo_;
    if (span < 1e-12) {
        table_.assign(1, lamb_difference_direct(omega_lo, bath_));
        return;
    }
    // Two guard nodes on each side keep the 4-point stencil inside the table.
    log_step_ = span / (lamb_table_nodes - 1);
    log_lo_ -= 2.0 * log_step_;
    table_.resize(lamb_table_nodes + 4);
    for (std::size_t i = 0; i < table_.size(); ++i)
        table_[i] = lamb_difference_direct(std::exp(log_lo_ + log_step_ * static_cast<double>(i)), bath_);
}

double GeneratorModel::lamb_shift_difference(double omega) const {
    if (table_.empty()) return 0.0;
    if (table_.size() == 1) return table_.front();
    const double x = (std::log(omega) - log_lo_) / log_step_;
    const auto last = static_cast<double>(table_.size() - 1);
    if (x < 1.0 || x > last - 2.0) return lamb_difference_direct(omega, bath_);
    // Cubic Lagrange through nodes i-1 .. i+2.
    const auto i = static_cast<std::size_t>(x);
    const double u = x - static_cast<double>(i);
    const double w0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
    const double w1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    const double w2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    const double w3 = (u + 1.0) * u * (u - 1.0) / 6.0;
    return w0 * table_[i - 1] + w1 * table_[i] + w2 * table_[i + 1] + w3 * table_[i + 2];
}

GeneratorCoefficients GeneratorModel::coefficients(double t) const {
    const double omega = gap(t, lz_);
    return assemble(omega, mixing_angle(t, lz_), mixing_angle_rate(t, lz_), lamb_shift_difference(omega), bath_);
}

}  // namespace lzd
