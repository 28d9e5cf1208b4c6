// ode.hpp: explicit Runge-Kutta integrators for small fixed-size real systems
//
// Dormand-Prince 5(4) with the Hairer-Wanner continuous extension (order 4
// dense output), and a classical fixed-step RK4 whose steps carry a cubic
// Hermite interpolant through the same DenseStep interface.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace lzd::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
    double rtol{1e-8};
    double atol{1e-10};
    double initial_step{0.0};  ///< 0 selects the step automatically
    double max_step{0.0};      ///< 0 means unbounded
    long max_steps{200'000'000};
};

struct Stats {
    long accepted{0};
    long rejected{0};
    long rhs_evaluations{0};
    double max_error_norm{0.0};  ///< largest scaled error of an accepted step (<= 1)
    double smallest_step{std::numeric_limits<double>::infinity()};
    double largest_step{0.0};
};

class integration_error : public std::runtime_error {
public:
    integration_error(const std::string& what, double time)
        : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Interpolant over one accepted step [t0, t0 + h].
template <std::size_t N>
struct DenseStep {
    double t0{0.0};
    double h{0.0};
    double t_next{0.0};  ///< exact end time (t0 + h up to rounding)
    State<N> r1{}, r2{}, r3{}, r4{}, r5{};

    double t1() const { return t_next; }

    State<N> operator()(double t) const {
        const double s = (t - t0) / h;
        const double s1 = 1.0 - s;
        State<N> y;
        for (std::size_t i = 0; i < N; ++i) y[i] = r1[i] + s * (r2[i] + s1 * (r3[i] + s * (r4[i] + s1 * r5[i])));
        return y;
    }

    State<N> end() const {
        State<N> y;
        for (std::size_t i = 0; i < N; ++i) y[i] = r1[i] + r2[i];
        return y;
    }
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                        a76 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                        e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// continuous extension
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

template <std::size_t N>
double scaled_norm(const State<N>& v, const State<N>& y0, const State<N>& y1, const Options& o) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = v[i] / sc;
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(N));
}

template <std::size_t N, class Rhs>
double initial_step(Rhs& rhs, double t0, const State<N>& y0, const State<N>& f0, double direction, const Options& o,
                    Stats& st) {
    const double d0 = scaled_norm<N>(y0, y0, y0, o);
    const double d1n = scaled_norm<N>(f0, y0, y0, o);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    State<N> y1, f1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + direction * h0 * f0[i];
    rhs(t0 + direction * h0, y1, f1);
    ++st.rhs_evaluations;
    State<N> df;
    for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - f0[i];
    const double d2 = scaled_norm<N>(df, y0, y0, o) / h0;
    const double m = std::max(d1n, d2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    return std::min(100.0 * h0, h1);
}

}  // namespace detail

/// Adaptive Dormand-Prince 5(4). `rhs(t, y, dydt)` fills dydt; `observer(step)`
/// sees every accepted DenseStep and returns false to stop early.
template <std::size_t N, class Rhs, class Observer>
Stats integrate_dopri5(Rhs&& rhs, State<N> y, double t0, double t1, const Options& opt, Observer&& observer) {
    using namespace detail;
    Stats st;
    if (t1 == t0) return st;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double hmax = opt.max_step > 0.0 ? opt.max_step : span;

    State<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
    rhs(t0, y, k1);
    ++st.rhs_evaluations;

    double h = opt.initial_step > 0.0 ? opt.initial_step : initial_step<N>(rhs, t0, y, k1, dir, opt, st);
    h = std::min(h, hmax);
    double t = t0;
    bool last_rejected = false;

    while (dir * (t1 - t) > 0.0) {
        if (st.accepted + st.rejected >= opt.max_steps) throw integration_error("step budget exhausted", t);
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))
            throw integration_error("step size underflow", t);
        bool final_step = false;
        if (h >= std::abs(t1 - t)) {
            h = std::abs(t1 - t);
            final_step = true;
        }
        const double hs = dir * h;

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
        rhs(t + c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const double tnew = final_step ? t1 : t + hs;
        rhs(t + hs, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(tnew, ynew, k7);
        st.rhs_evaluations += 6;

        for (std::size_t i = 0; i < N; ++i)
            err[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double en = scaled_norm<N>(err, y, ynew, opt);
        if (!std::isfinite(en)) throw integration_error("non-finite error estimate", t);

        if (en <= 1.0) {
            DenseStep<N> ds;
            ds.t0 = t;
            ds.h = hs;
            ds.t_next = tnew;
            for (std::size_t i = 0; i < N; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = hs * k1[i] - ydiff;
                ds.r1[i] = y[i];
                ds.r2[i] = ydiff;
                ds.r3[i] = bspl;
                ds.r4[i] = ydiff - hs * k7[i] - bspl;
                ds.r5[i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            ++st.accepted;
            st.max_error_norm = std::max(st.max_error_norm, en);
            st.smallest_step = std::min(st.smallest_step, h);
            st.largest_step = std::max(st.largest_step, h);
            t = tnew;
            y = ynew;
            k1 = k7;
            if (!observer(static_cast<const DenseStep<N>&>(ds))) return st;
            double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
            fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
            h = std::min(h * fac, hmax);
            last_rejected = false;
        } else {
            ++st.rejected;
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
            last_rejected = true;
        }
    }
    return st;
}

/// Classical RK4 with fixed step (last step shortened to land on t1).
template <std::size_t N, class Rhs, class Observer>
Stats integrate_rk4(Rhs&& rhs, State<N> y, double t0, double t1, double step, Observer&& observer) {
    Stats st;
    if (t1 == t0) return st;
    if (!(step > 0.0)) throw std::invalid_argument("integrate_rk4: step must be positive");
    const double dir = t1 > t0 ? 1.0 : -1.0;
    State<N> k1, k2, k3, k4, tmp, ynew, fend;
    rhs(t0, y, k1);
    ++st.rhs_evaluations;
    double t = t0;
    while (dir * (t1 - t) > 0.0) {
        const bool final_step = step >= std::abs(t1 - t);
        const double hs = final_step ? (t1 - t) : dir * step;
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * hs * k1[i];
        rhs(t + 0.5 * hs, tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * hs * k2[i];
        rhs(t + 0.5 * hs, tmp, k3);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * k3[i];
        rhs(t + hs, tmp, k4);
        for (std::size_t i = 0; i < N; ++i) ynew[i] = y[i] + hs / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const double tnew = final_step ? t1 : t + hs;
        rhs(tnew, ynew, fend);
        st.rhs_evaluations += 4;

        DenseStep<N> ds;
        ds.t0 = t;
        ds.h = hs;
        ds.t_next = tnew;
        for (std::size_t i = 0; i < N; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = hs * k1[i] - ydiff;
            ds.r1[i] = y[i];
            ds.r2[i] = ydiff;
            ds.r3[i] = bspl;
            ds.r4[i] = ydiff - hs * fend[i] - bspl;
        }
        ++st.accepted;
        st.smallest_step = std::min(st.smallest_step, std::abs(hs));
        st.largest_step = std::max(st.largest_step, std::abs(hs));
        t = tnew;
        y = ynew;
        k1 = fend;
        if (!observer(static_cast<const DenseStep<N>&>(ds))) return st;
    }
    return st;
}

}  // namespace lzd::ode
