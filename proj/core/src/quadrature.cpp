#include "lzd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lzd::quad {

namespace {

struct Panel {
    double a, m, b;
    double fa, fm, fb;
    double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

void recurse(const Integrand& f, const Panel& p, double tol, int depth, Result& out) {
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    out.evaluations += 2;
    const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
    const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol || p.b - p.a < 1e-15 * std::max(1.0, std::abs(p.a))) {
        if (depth <= 0 && std::abs(delta) > 15.0 * tol) out.converged = false;
        out.value += left + right + delta / 15.0;
        out.error_estimate += std::abs(delta) / 15.0;
        return;
    }
    recurse(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, out);
    recurse(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, out);
}

// Coarse pass used to turn the relative tolerance into an absolute one.
double rough_magnitude(const Integrand& f, double a, double b, long& evals) {
    constexpr int n = 16;
    double s = 0.0;
    const double h = (b - a) / n;
    for (int i = 0; i <= n; ++i) s += std::abs(f(a + i * h)) * ((i == 0 || i == n) ? 0.5 : 1.0);
    evals += n + 1;
    return s * std::abs(h);
}

}  // namespace

Result adaptive_simpson(const Integrand& f, double a, double b, const Settings& s) {
    Result out;
    if (a == b) return out;
    const double scale = rough_magnitude(f, a, b, out.evaluations);
    const double tol = std::max(s.abs_tol, s.rel_tol * scale);
    // Split into a few initial panels so narrow features are not missed.
    constexpr int initial = 8;
    const double h = (b - a) / initial;
    for (int i = 0; i < initial; ++i) {
        const double pa = a + i * h;
        const double pb = (i + 1 == initial) ? b : a + (i + 1) * h;
        const double pm = 0.5 * (pa + pb);
        const double fa = f(pa);
        const double fm = f(pm);
        const double fb = f(pb);
        out.evaluations += 3;
        recurse(f, {pa, pm, pb, fa, fm, fb, simpson(pa, pb, fa, fm, fb)}, tol / initial, s.max_depth, out);
    }
    return out;
}

Result integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints, const Settings& s) {
    const double sign = (b >= a) ? 1.0 : -1.0;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    std::vector<double> cuts{lo};
    for (double bp : breakpoints)
        if (bp > lo && bp < hi) cuts.push_back(bp);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());

    Result total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Result r = adaptive_simpson(f, cuts[i], cuts[i + 1], s);
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
        total.converged = total.converged && r.converged;
    }
    total.value *= sign;
    return total;
}

Result principal_value(const Integrand& f, double pole, double lo, double hi, double excision,
                       std::span<const double> breakpoints, const Settings& s) {
    if (!(hi > lo)) throw std::invalid_argument("principal_value: empty interval");
    if (pole <= lo || pole >= hi) {
        return integrate([&](double nu) { return f(nu) / (pole - nu); }, lo, hi, breakpoints, s);
    }
    const double radius = std::min(pole - lo, hi - pole);
    const double eps = std::min(excision, 0.5 * radius);

    auto folded = [&](double u) { return (f(pole - u) - f(pole + u)) / u; };

    std::vector<double> folded_breaks;
    for (double bp : breakpoints) folded_breaks.push_back(std::abs(pole - bp));

    Result total = integrate(folded, eps, radius, folded_breaks, s);
    total.value += eps * folded(0.5 * eps);
    total.evaluations += 2;

    Result tail;
    if (pole - lo > radius) {
        tail = integrate([&](double nu) { return f(nu) / (pole - nu); }, lo, pole - radius, breakpoints, s);
    } else if (hi - pole > radius) {
        tail = integrate([&](double nu) { return f(nu) / (pole - nu); }, pole + radius, hi, breakpoints, s);
    }
    total.value += tail.value;
    total.error_estimate += tail.error_estimate;
    total.evaluations += tail.evaluations;
    total.converged = total.converged && tail.converged;
    return total;
}

}  // namespace lzd::quad
