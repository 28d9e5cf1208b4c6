#include "lzd/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "lzd/entanglement.hpp"

namespace lzd {

namespace {

using Pauli12 = ode::State<12>;
using Pauli13 = ode::State<13>;
using Master32 = ode::State<32>;

template <std::size_t N = 12>
ode::State<N> pack(const PauliState& st) {
    ode::State<N> y{};
    for (std::size_t i = 0; i < 3; ++i) y[i] = st.s[i];
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) y[3 + 3 * j + i] = st.chi[i][j];
    return y;
}

template <std::size_t N>
PauliState unpack(const ode::State<N>& y, const Vec3& r) {
    PauliState st;
    for (std::size_t i = 0; i < 3; ++i) st.s[i] = y[i];
    st.r = r;
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) st.chi[i][j] = y[3 + 3 * j + i];
    return st;
}

Pauli12 head(const ode::State<13>& y) {
    Pauli12 h;
    std::copy_n(y.begin(), 12, h.begin());
    return h;
}

Master32 pack(const Mat4& m) {
    Master32 y{};
    for (std::size_t i = 0; i < 16; ++i) {
        y[2 * i] = m.data[i].real();
        y[2 * i + 1] = m.data[i].imag();
    }
    return y;
}

Mat4 unpack(const Master32& y) {
    Mat4 m;
    for (std::size_t i = 0; i < 16; ++i) m.data[i] = cplx(y[2 * i], y[2 * i + 1]);
    return m;
}

void validate_window(double t_int, double t_end, std::span<const double> grid) {
    if (!(t_end > t_int)) throw std::invalid_argument("evolve: t_end must exceed t_int");
    const double slack = 1e-12 * std::max(1.0, std::max(std::abs(t_int), std::abs(t_end)));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < t_int - slack || grid[i] > t_end + slack)
            throw std::invalid_argument("evolve: output time outside [t_int, t_end]");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("evolve: output times must increase");
    }
}

double rk4_step(const LZParams& p, double t_int, double t_end) {
    const double omega_max = gap(std::max(std::abs(t_int), std::abs(t_end)), p);
    const double tau_s_min = 1.0 / (2.0 * omega_max);
    return std::min(tau_s_min / 20.0, (t_end - t_int) / 1e5);
}

// Shared driver: integrates an N-dimensional system and records the samples.
template <std::size_t N, class Rhs, class ToState, class TraceOf>
Trajectory propagate(const ode::State<N>& y0, double t_int, double t_end, const LZParams& p, const BathParams& b,
                     std::span<const double> grid, const SolverOptions& opt, Rhs&& rhs, ToState&& to_state,
                     TraceOf&& trace_of) {
    Trajectory traj;
    traj.times.reserve(grid.size());
    const DensityTolerance tol{opt.invariant_tolerance, opt.invariant_tolerance};

    auto record = [&](double t, const ode::State<N>& y) {
        const PauliState st = to_state(t, y);
        const double trace_dev = trace_of(y);
        if (!(trace_dev <= opt.invariant_tolerance)) throw solver_error("trace drifted from 1", t);
        try {
            require_valid(st, opt.invariant_tolerance);
        } catch (const precondition_error& e) {
            throw solver_error(std::string("state invariant violated: ") + e.what(), t);
        }
        const Mat4 rho = assemble_density(st);
        const double min_ev = hermitian_eigenvalues(rho)[0];
        if (!(min_ev >= -opt.invariant_tolerance)) throw solver_error("density matrix lost positivity", t);
        traj.times.push_back(t);
        traj.states.push_back(st);
        traj.negativity.push_back(negativity(rho, tol).value);
        traj.min_eigenvalue.push_back(min_ev);
        traj.trace_deviation.push_back(trace_dev);
        traj.timescales.push_back(timescales(t, p, b, opt.secular_threshold));
    };

    std::size_t next = 0;
    while (next < grid.size() && grid[next] <= t_int) record(grid[next++], y0);

    auto observer = [&](const ode::DenseStep<N>& step) {
        while (next < grid.size() && grid[next] <= step.t1()) {
            const double t = grid[next++];
            record(t, t >= step.t1() ? step.end() : step(t));
        }
        return true;
    };

    try {
        if (opt.method == SolverMethod::dopri5)
            traj.solver_stats = ode::integrate_dopri5<N>(rhs, y0, t_int, t_end, opt.tolerances, observer);
        else
            traj.solver_stats = ode::integrate_rk4<N>(rhs, y0, t_int, t_end, rk4_step(p, t_int, t_end), observer);
    } catch (const ode::integration_error& e) {
        throw solver_error(e.what(), e.time());
    }
    if (next < grid.size()) throw solver_error("output time beyond the integration window", grid[next]);
    return traj;
}

}  // namespace

bool Trajectory::all_secular() const {
    return std::all_of(timescales.begin(), timescales.end(), [](const TimescaleReport& r) { return r.secular_ok; });
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t points) {
    if (points < 2) throw std::invalid_argument("uniform_grid: need at least two points");
    std::vector<double> g(points);
    const double h = (t1 - t0) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = t0 + h * static_cast<double>(i);
    g.back() = t1;
    return g;
}

ode::State<12> pauli_rhs(const GeneratorCoefficients& c, const ode::State<12>& y, const Vec3& r) {
    const BlochGenerator gen = bloch_matrix(c);
    ode::State<12> dy{};
    for (std::size_t col = 0; col < 4; ++col) {
        // column 0 is s, columns 1..3 are chi_j
        const std::size_t off = 3 * col;
        const double drive = col == 0 ? 1.0 : r[col - 1];
        for (std::size_t i = 0; i < 3; ++i) {
            double acc = drive * gen.q[i];
            for (std::size_t k = 0; k < 3; ++k) acc += gen.Q[i][k] * y[off + k];
            dy[off + i] = acc;
        }
    }
    return dy;
}

double precession_angle(double t, double t_int, const LZParams& p) {
    // d/dt [t Omega + (delta^2 / v) asinh(v t / delta)] = 2 Omega
    auto primitive = [&](double u) {
        return u * gap(u, p) + p.delta * p.delta / p.v * std::asinh(p.v * u / p.delta);
    };
    return primitive(t) - primitive(t_int);
}

PauliState rotate_system(const PauliState& st, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    PauliState out = st;
    out.s[0] = c * st.s[0] - s * st.s[1];
    out.s[1] = s * st.s[0] + c * st.s[1];
    for (std::size_t j = 0; j < 3; ++j) {
        out.chi[0][j] = c * st.chi[0][j] - s * st.chi[1][j];
        out.chi[1][j] = s * st.chi[0][j] + c * st.chi[1][j];
    }
    return out;
}

ode::State<12> pauli_rhs_corotating(const GeneratorCoefficients& c, const ode::State<12>& y, const Vec3& r,
                                    double angle) {
    // R(-a) (Q - 2k J_z) R(a): the precession drops out, the phi_dot coupling picks up the phase.
    const double cs = std::cos(angle);
    const double sn = std::sin(angle);
    const double w = 2.0 * c.phi_dot;
    ode::State<12> dy{};
    for (std::size_t col = 0; col < 4; ++col) {
        const std::size_t off = 3 * col;
        const double drive = col == 0 ? 1.0 : r[col - 1];
        const double y1 = y[off];
        const double y2 = y[off + 1];
        const double y3 = y[off + 2];
        dy[off] = -c.b * y1 - w * cs * y3;
        dy[off + 1] = -c.b * y2 + w * sn * y3;
        dy[off + 2] = w * (cs * y1 - sn * y2) - 2.0 * c.a_plus * y3 - 2.0 * c.a_minus * drive;
    }
    return dy;
}

namespace {

// Superoperator of L on the four matrix units, one table per coefficient (k, phi_dot, f, g, l).
using SuperColumns = std::array<Mat2, 4>;

const std::array<SuperColumns, 5>& generator_basis() {
    static const std::array<SuperColumns, 5> basis = [] {
        std::array<SuperColumns, 5> out{};
        for (std::size_t m = 0; m < 5; ++m) {
            GeneratorCoefficients unit_coeff{};
            double* fields[] = {&unit_coeff.k, &unit_coeff.phi_dot, &unit_coeff.f, &unit_coeff.g, &unit_coeff.l};
            *fields[m] = 1.0;
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) {
                    Mat2 unit;
                    unit(k, l) = 1.0;
                    out[m][2 * k + l] = apply_generator(unit, unit_coeff);
                }
        }
        return out;
    }();
    return basis;
}

inline cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

}  // namespace

Mat4 lift_generator(const Mat4& rho, const GeneratorCoefficients& c) {
    const auto& basis = generator_basis();
    const double weight[] = {c.k, c.phi_dot, c.f, c.g, c.l};
    SuperColumns columns{};
    for (std::size_t m = 0; m < 5; ++m)
        for (std::size_t kl = 0; kl < 4; ++kl)
            for (std::size_t e = 0; e < 4; ++e) columns[kl].data[e] += weight[m] * basis[m][kl].data[e];

    Mat4 out;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) {
                    const cplx x = rho(2 * k + a, 2 * l + b);
                    const Mat2& col = columns[2 * k + l];
                    for (std::size_t i = 0; i < 2; ++i)
                        for (std::size_t j = 0; j < 2; ++j)
                            out(2 * i + a, 2 * j + b) += mul(col(i, j), x);
                }
    return out;
}

Trajectory evolve_numeric(const PauliState& init, double t_int, double t_end, const LZParams& p, const BathParams& b,
                          std::span<const double> grid, const SolverOptions& opt) {
    validate_window(t_int, t_end, grid);
    require_valid(init);
    const GeneratorModel model(p, b, t_int, t_end);
    const Vec3 r = init.r;
    if (opt.frame == Frame::lab) {
        auto rhs = [&](double t, const Pauli12& y, Pauli12& dy) { dy = pauli_rhs(model.coefficients(t), y, r); };
        return propagate<12>(
            pack(init), t_int, t_end, p, b, grid, opt, rhs,
            [&](double, const Pauli12& y) { return unpack(y, r); }, [](const Pauli12&) { return 0.0; });
    }
    // y[12] accumulates the Lamb-shift part of the precession angle.
    auto angle = [&](double t, const Pauli13& y) { return precession_angle(t, t_int, p) + y[12]; };
    auto rhs = [&](double t, const Pauli13& y, Pauli13& dy) {
        const GeneratorCoefficients c = model.coefficients(t);
        const Pauli12 d = pauli_rhs_corotating(c, head(y), r, angle(t, y));
        std::copy(d.begin(), d.end(), dy.begin());
        dy[12] = 2.0 * (c.k - gap(t, p));
    };
    return propagate<13>(
        pack<13>(init), t_int, t_end, p, b, grid, opt, rhs,
        [&](double t, const Pauli13& y) { return rotate_system(unpack(y, r), angle(t, y)); },
        [](const Pauli13&) { return 0.0; });
}

Trajectory evolve_full_master(const PauliState& init, double t_int, double t_end, const LZParams& p,
                              const BathParams& b, std::span<const double> grid, const SolverOptions& opt) {
    validate_window(t_int, t_end, grid);
    require_valid(init);
    const GeneratorModel model(p, b, t_int, t_end);
    auto rhs = [&](double t, const Master32& y, Master32& dy) {
        dy = pack(lift_generator(unpack(y), model.coefficients(t)));
    };
    return propagate<32>(
        pack(assemble_density(init)), t_int, t_end, p, b, grid, opt, rhs,
        [](double, const Master32& y) { return pauli_project(unpack(y)); },
        [](const Master32& y) { return std::abs(unpack(y).trace() - cplx(1.0)); });
}

SlowSolution evolve_slow_analytic(const PauliState& init, double t_int, double t, const LZParams& p,
                                  const BathParams& b) {
    p.validate();
    b.validate();
    SlowSolution out;
    out.slow_regime_valid = p.v * std::max(std::abs(t_int), std::abs(t)) <= 0.1 * p.delta;
    const double tau = t - t_int;
    if (tau == 0.0) {
        out.state = init;
        return out;
    }
    const GeneratorCoefficients c = slow_limit_coefficients(p, b);
    const double transverse = std::exp(-c.b * tau);
    const double cs = std::cos(2.0 * c.k * tau);
    const double sn = std::sin(2.0 * c.k * tau);
    const double longitudinal = std::exp(-2.0 * c.a_plus * tau);
    // (a_minus / a_plus)(1 - e^{-2 a_plus tau}) written as 2 a_minus tau * expm1 ratio
    const double x = 2.0 * c.a_plus * tau;
    const double relax = x == 0.0 ? 1.0 : -std::expm1(-x) / x;
    const double offset = 2.0 * c.a_minus * tau * relax;

    auto rotate = [&](double u, double w, double& u_out, double& w_out) {
        u_out = transverse * (u * cs - w * sn);
        w_out = transverse * (u * sn + w * cs);
    };

    PauliState& st = out.state;
    st.r = init.r;
    rotate(init.s[0], init.s[1], st.s[0], st.s[1]);
    st.s[2] = init.s[2] * longitudinal - offset;
    for (std::size_t j = 0; j < 3; ++j) {
        rotate(init.chi[0][j], init.chi[1][j], st.chi[0][j], st.chi[1][j]);
        st.chi[2][j] = init.chi[2][j] * longitudinal - offset * init.r[j];
    }
    return out;
}

namespace {

template <std::size_t N, class Rhs>
std::optional<double> crossing_search(Rhs&& rhs, const ode::State<N>& y0, double t_int, double t_max, const Vec3& r,
                                      double threshold, const SolverOptions& opt, double time_tol) {
    // True while the smallest partial-transpose eigenvalue lies below -threshold.
    const Mat4 shift = threshold * Mat4::identity();
    auto above = [&](const ode::State<N>& y) {
        return !is_positive_definite(partial_transpose_second(assemble_density(unpack(y, r))) + shift);
    };
    if (!above(y0)) return t_int;

    std::optional<double> hit;
    auto observer = [&](const ode::DenseStep<N>& step) {
        if (above(step.end())) return true;
        double lo = step.t0;
        double hi = step.t1();
        while (hi - lo > time_tol * std::max(1.0, std::abs(hi))) {
            const double mid = 0.5 * (lo + hi);
            (above(step(mid)) ? lo : hi) = mid;
        }
        hit = 0.5 * (lo + hi);
        return false;
    };
    try {
        ode::integrate_dopri5<N>(rhs, y0, t_int, t_max, opt.tolerances, observer);
    } catch (const ode::integration_error& e) {
        throw solver_error(e.what(), e.time());
    }
    return hit;
}

}  // namespace

std::optional<double> first_negativity_crossing(const PauliState& init, double t_int, double t_max,
                                                const LZParams& p, const BathParams& b, double threshold,
                                                const SolverOptions& opt, double time_tol) {
    if (!(t_max > t_int)) throw std::invalid_argument("first_negativity_crossing: empty window");
    if (!(threshold >= 0.0)) throw std::invalid_argument("first_negativity_crossing: negative threshold");
    require_valid(init);
    const GeneratorModel model(p, b, t_int, t_max);
    const Vec3 r = init.r;
    if (opt.frame == Frame::lab) {
        auto rhs = [&](double t, const Pauli12& y, Pauli12& dy) { dy = pauli_rhs(model.coefficients(t), y, r); };
        return crossing_search<12>(rhs, pack(init), t_int, t_max, r, threshold, opt, time_tol);
    }
    // co-rotating: PT test on y itself
    auto rhs = [&](double t, const Pauli13& y, Pauli13& dy) {
        const GeneratorCoefficients c = model.coefficients(t);
        const Pauli12 d = pauli_rhs_corotating(c, head(y), r, precession_angle(t, t_int, p) + y[12]);
        std::copy(d.begin(), d.end(), dy.begin());
        dy[12] = 2.0 * (c.k - gap(t, p));
    };
    return crossing_search<13>(rhs, pack<13>(init), t_int, t_max, r, threshold, opt, time_tol);
}

}  // namespace lzd
