// quadrature.hpp: adaptive Simpson and symmetric-excision principal values

#pragma once

#include <functional>
#include <span>
#include <stdexcept>

namespace lzd::quad {

struct Result {
    double value{0.0};
    double error_estimate{0.0};
    long evaluations{0};
    bool converged{true};
};

struct Settings {
    double abs_tol{1e-11};
    double rel_tol{1e-11};
    int max_depth{48};
};

class quadrature_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Integrand = std::function<double(double)>;

/// Adaptive Simpson on [a, b] with Richardson-corrected panels.
Result adaptive_simpson(const Integrand& f, double a, double b, const Settings& s = {});

/// Adaptive Simpson over [a, b] split at every breakpoint strictly inside it.
Result integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints, const Settings& s = {});

/// PV int_lo^hi f(nu) / (pole - nu) d nu.
///
/// The largest interval symmetric about the pole is folded onto
/// u in (excision, R) as (f(pole - u) - f(pole + u)) / u, the excised core
/// [0, excision] is filled by one midpoint sample of the same folded
/// integrand, and the leftover one-sided tail is integrated directly.
/// Breakpoints mark kinks of f and are respected on both branches.
Result principal_value(const Integrand& f, double pole, double lo, double hi, double excision,
                       std::span<const double> breakpoints = {}, const Settings& s = {});

}  // namespace lzd::quad
