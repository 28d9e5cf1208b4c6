// entanglement.hpp: negativity, X-state spectrum, slow-regime decay law and survival time

#pragma once

#include <array>
#include <numbers>

#include "lzd/bath.hpp"
#include "lzd/linalg.hpp"
#include "lzd/lz_model.hpp"
#include "lzd/pauli_state.hpp"

namespace lzd {

Mat4 assemble_density(const PauliState& st);

/// Inverse of assemble_density: s_i = Tr[(sigma_i x 1) rho], r_i = Tr[(1 x sigma_i) rho],
/// chi_ij = Tr[(sigma_i x sigma_j) rho] (real parts).
PauliState pauli_project(const Mat4& rho);

enum class NegativityMethod { general_eigensolver, x_state_closed_form };

struct NegativityResult {
    double value{0.0};
    std::array<double, 4> pt_eigenvalues{};  ///< ascending
    NegativityMethod method{NegativityMethod::general_eigensolver};
};

struct DensityTolerance {
    double trace{density_trace_tolerance};
    double eigenvalue{density_eigenvalue_tolerance};
};

/// N = 1/2 sum(|mu| - mu) over the spectrum of the partial transpose on the reference factor.
NegativityResult negativity(const Mat4& rho, const DensityTolerance& tol = {});

/// X form: s = (0,0,s3), r = (0,0,r3), chi supported on {11, 12, 21, 22, 33}
/// with chi21 = chi12 and chi22 = -chi11.
bool is_x_state(const PauliState& st, double tol = 1e-10);

/// Closed-form partial-transpose spectrum of an X state, ascending.
/// Throws precondition_error for states that are not in X form.
std::array<double, 4> xstate_pt_eigenvalues(const PauliState& st, double tol = 1e-10);

/// Negativity of a Pauli state. The closed form is used only when requested and the
/// X-form precondition holds; otherwise falls back to the eigensolver.
NegativityResult negativity(const PauliState& st, NegativityMethod preferred = NegativityMethod::general_eigensolver,
                            const DensityTolerance& tol = {});

/// Slow-regime T = 0 negativity of cos(eta)|00> + sin(eta)|11>.
struct SlowDecayLaw {
    double value{0.0};          ///< from the coefficient chain (closed-form solution + X spectrum)
    double rate{0.0};           ///< 2 a_plus, the decay rate of the Bell-input negativity
    double printed_value{0.0};  ///< 1/2 exp(-(t - t_int) lambda^2 pi J(2 delta) cos^2 theta)
    double printed_rate{0.0};   ///< lambda^2 pi J(2 delta) cos^2 theta
    bool rates_differ{false};   ///< the two rates disagree beyond 1e-12 relative
};

/// Throws std::invalid_argument unless the bath temperature is exactly 0.
SlowDecayLaw negativity_slow_T0(double t, double t_int, const LZParams& p, const BathParams& b,
                                double eta = 0.25 * std::numbers::pi);

/// xi(n) = (3 - l^2 - 2 sqrt(2 - l^2)) / (1 - l^2) with l = 1 / (2n + 1), evaluated as the
/// reciprocal of the larger root so it stays accurate as n -> 0 (xi -> n).
double survival_xi(double nbar);

/// tau_ent = -ln(xi) / (2 b) for longitudinal coupling in the slow regime; +inf at T = 0.
/// Throws std::invalid_argument when the coupling angle is not 0.
double survival_time(const BathParams& b, const LZParams& p);

}  // namespace lzd
