// dynamics.hpp: propagation of the system-reference pair under the local Landau-Zener channel
//
// Two independent propagators are provided: the 12-variable Bloch/correlation
// ODE (reference Bloch vector held fixed) and the full 4x4 master equation
// obtained by lifting the single-qubit generator with the identity on the
// reference factor. A closed-form solution covers the slow-driving regime.

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lzd/bath.hpp"
#include "lzd/generator.hpp"
#include "lzd/lz_model.hpp"
#include "lzd/ode.hpp"
#include "lzd/pauli_state.hpp"

namespace lzd {

enum class SolverMethod { dopri5, rk4_fixed };

/// Coordinates used by the Pauli route. `corotating` removes the coherent precession
/// about z analytically; states are rotated back before they are recorded.
enum class Frame { lab, corotating };

struct SolverOptions {
    SolverMethod method{SolverMethod::dopri5};
    ode::Options tolerances{};          ///< rtol 1e-8, atol 1e-10 by default
    double invariant_tolerance{1e-6};   ///< state-invariant violations beyond this abort the run
    double secular_threshold{default_secular_threshold};
    Frame frame{Frame::lab};
};

/// Runtime failure of a propagation; carries the time at which it happened.
class solver_error : public std::runtime_error {
public:
    solver_error(const std::string& what, double time)
        : std::runtime_error(what + " (t=" + std::to_string(time) + ")"), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PauliState> states;
    std::vector<double> negativity;
    std::vector<double> min_eigenvalue;   ///< of the assembled two-qubit density matrix
    std::vector<double> trace_deviation;  ///< |Tr rho - 1| as propagated (0 for the Pauli route)
    std::vector<TimescaleReport> timescales;
    ode::Stats solver_stats;

    std::size_t size() const { return times.size(); }
    bool all_secular() const;
};

/// Evenly spaced output times, both ends included.
std::vector<double> uniform_grid(double t0, double t1, std::size_t points);

/// ds/dt = Q s + q,  d chi_j/dt = Q chi_j + r_j q,  r constant.
Trajectory evolve_numeric(const PauliState& init, double t_int, double t_end, const LZParams& p, const BathParams& b,
                          std::span<const double> grid, const SolverOptions& opt = {});

/// d rho/dt = (L_t x id) rho on the 4x4 density matrix, re-projected onto Pauli coordinates.
Trajectory evolve_full_master(const PauliState& init, double t_int, double t_end, const LZParams& p,
                              const BathParams& b, std::span<const double> grid, const SolverOptions& opt = {});

struct SlowSolution {
    PauliState state;
    bool slow_regime_valid{true};  ///< v * max(|t_int|, |t|) <= 0.1 delta
};

/// Closed-form propagation with coefficients frozen at their slow-driving values.
SlowSolution evolve_slow_analytic(const PauliState& init, double t_int, double t, const LZParams& p,
                                  const BathParams& b);

/// Time-derivative of (s, chi) for the Pauli route; exposed for tests and benchmarks.
ode::State<12> pauli_rhs(const GeneratorCoefficients& c, const ode::State<12>& y, const Vec3& r);

/// int_{t_int}^{t} 2 Omega(u) du, the bare precession angle.
double precession_angle(double t, double t_int, const LZParams& p);

/// Rotation of the system index about z: s -> R s, chi -> R chi, r untouched.
/// A local unitary on the system qubit, so negativity is unchanged.
PauliState rotate_system(const PauliState& st, double angle);

/// Pauli-route derivative in co-rotating coordinates y = R(-angle) x.
ode::State<12> pauli_rhs_corotating(const GeneratorCoefficients& c, const ode::State<12>& y, const Vec3& r,
                                    double angle);

/// (L x id) rho.
Mat4 lift_generator(const Mat4& rho, const GeneratorCoefficients& c);

/// First time (after t_int, before t_max) at which the negativity of the Pauli-route
/// solution drops to `threshold`; threshold 0 locates the sign change of the smallest
/// partial-transpose eigenvalue. Bracketed on the dense output to `time_tol`; the
/// test at each step is a Cholesky factorization of PT(rho) + threshold * 1, and
/// opt.frame selects the coordinates (the adaptive pair is always used).
std::optional<double> first_negativity_crossing(const PauliState& init, double t_int, double t_max,
                                                const LZParams& p, const BathParams& b, double threshold,
                                                const SolverOptions& opt = {}, double time_tol = 1e-9);

}  // namespace lzd
