// pauli_state.hpp: two-qubit state in the Pauli (Bloch / correlation tensor) basis

#pragma once

#include "lzd/generator.hpp"

namespace lzd {

/// rho = 1/4 (1x1 + s.sigma x 1 + 1 x r.sigma + sum_ij chi_ij sigma_i x sigma_j)
/// with the system qubit as the first factor and the reference qubit second.
struct PauliState {
    Vec3 s{};
    Vec3 r{};
    Mat3 chi{};  ///< chi[i][j] = <sigma_i x sigma_j>

    friend bool operator==(const PauliState&, const PauliState&) = default;
};

inline constexpr double pauli_state_tolerance = 1e-8;

/// Component bounds |s|, |r| <= 1 and |chi_ij| <= 1 within tol; throws precondition_error.
void require_valid(const PauliState& st, double tol = pauli_state_tolerance);

/// cos(eta)|00> + sin(eta)|11>, eta in [0, pi/2].
PauliState schmidt_initial(double eta);

double max_abs_difference(const PauliState& a, const PauliState& b);

}  // namespace lzd
