// bath.hpp: Ohmic thermal environment: spectral density, occupation, Kossakowski rates, Lamb shift

#pragma once

#include "lzd/quadrature.hpp"

namespace lzd {

/// How the zero-frequency (dephasing) channel rate gamma(0) is read.
enum class DephasingModel {
    ohmic_limit,  ///< gamma(0) = lim_{w->0+} 2 pi J(w) n(w) = 2 pi T
    vanishing,    ///< gamma(0) = 0
};

struct BathParams {
    double temperature{0.0};  ///< k_B = 1
    double cutoff{10.0 / 3.0};
    double coupling{0.1};     ///< lambda
    double angle{0.0};        ///< theta, radians; 0 longitudinal, pi/2 transversal
    bool lamb_shift_enabled{false};
    double pv_upper_limit{0.0};  ///< PV window half-width; <= 0 selects 50 * cutoff
    DephasingModel dephasing{DephasingModel::ohmic_limit};

    void validate() const;
    double pv_window() const { return pv_upper_limit > 0.0 ? pv_upper_limit : 50.0 * cutoff; }
};

/// J(w) = w exp(-w / w_c), w >= 0.
double spectral_density(double omega, const BathParams& b);

/// Bose occupation 1 / (exp(w / T) - 1); exactly 0 at T = 0.
double mean_occupation(double omega, double temperature);

/// gamma(w): 2 pi J(w) (n + 1) for w > 0, 2 pi J(|w|) n(|w|) for w < 0, gamma(0) per DephasingModel.
double kossakowski_rate(double omega, const BathParams& b);

struct LambShiftSettings {
    quad::Settings quadrature{1e-12, 1e-11, 50};
    double excision_fraction{1e-6};  ///< excision radius in units of cutoff
    double max_relative_error{1e-6};
};

/// S(w) = (1 / 2pi) PV int_{-L}^{L} gamma(nu) / (w - nu) d nu with L = pv_window().
///
/// Evaluated regardless of lamb_shift_enabled; the flag only controls whether
/// the generator uses it. Throws quad::quadrature_error when the estimated
/// error exceeds max_relative_error of the result.
quad::Result lamb_shift_coefficient(double omega, const BathParams& b, const LambShiftSettings& s = {});

}  // namespace lzd
