// lz_model.hpp: Landau-Zener drive, instantaneous spectrum and adiabatic-frame rotation

#pragma once

#include "lzd/linalg.hpp"

namespace lzd {

/// H(t) = delta * sigma_x + v * t * sigma_z  (hbar = 1)
struct LZParams {
    double delta{10.0};  ///< minimum half-gap
    double v{1.0};       ///< sweep rate

    /// Throws std::invalid_argument unless delta > 0 and v > 0.
    void validate() const;
};

/// Omega(t) = sqrt(v^2 t^2 + delta^2)
double gap(double t, const LZParams& p);

/// phi(t) = atan2(delta, v t) / 2, continuous in t with range (0, pi/2).
double mixing_angle(double t, const LZParams& p);

/// d phi / dt = -delta v / (2 Omega^2)
double mixing_angle_rate(double t, const LZParams& p);

Mat2 hamiltonian_lab(double t, const LZParams& p);

/// R(t) = exp(i phi(t) sigma_y); R H R^dagger = Omega sigma_z.
Mat2 rotation(double t, const LZParams& p);

struct TransitionFrequencies {
    double emission;    ///< omega_1 = 2 Omega
    double absorption;  ///< omega_2 = -2 Omega
    double dephasing;   ///< omega_3 = 0
};

TransitionFrequencies transition_frequencies(double t, const LZParams& p);

}  // namespace lzd
