#include "lzd/bath.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lzd {

void BathParams::validate() const {
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw std::invalid_argument("BathParams: temperature must be >= 0");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw std::invalid_argument("BathParams: cutoff must be > 0");
    if (!(coupling > 0.0) || !std::isfinite(coupling)) throw std::invalid_argument("BathParams: coupling must be > 0");
    if (!std::isfinite(angle)) throw std::invalid_argument("BathParams: angle must be finite");
}

double spectral_density(double omega, const BathParams& b) {
    if (omega < 0.0) throw std::invalid_argument("spectral_density: negative frequency");
    return omega * std::exp(-omega / b.cutoff);
}

double mean_occupation(double omega, double temperature) {
    if (!(omega > 0.0)) throw std::invalid_argument("mean_occupation: frequency must be positive");
    if (temperature <= 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

double kossakowski_rate(double omega, const BathParams& b) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (omega > 0.0) return two_pi * spectral_density(omega, b) * (mean_occupation(omega, b.temperature) + 1.0);
    if (omega < 0.0) return two_pi * spectral_density(-omega, b) * mean_occupation(-omega, b.temperature);
    return b.dephasing == DephasingModel::ohmic_limit ? two_pi * b.temperature : 0.0;
}

quad::Result lamb_shift_coefficient(double omega, const BathParams& b, const LambShiftSettings& s) {
    const double window = b.pv_window();
    const std::array<double, 1> kinks{0.0};
    // integrand uses the continuous Ohmic-limit gamma
    BathParams smooth = b;
    smooth.dephasing = DephasingModel::ohmic_limit;
    auto gamma = [&](double nu) { return kossakowski_rate(nu, smooth); };

    quad::Result r = quad::principal_value(gamma, omega, -window, window, s.excision_fraction * b.cutoff, kinks,
                                           s.quadrature);
    const double inv_two_pi = 0.5 / std::numbers::pi;
    r.value *= inv_two_pi;
    r.error_estimate *= inv_two_pi;
    if (!r.converged || r.error_estimate > std::max(s.max_relative_error * std::abs(r.value), 1e-12)) {
        throw quad::quadrature_error("lamb_shift_coefficient: quadrature did not converge at omega=" +
                                     std::to_string(omega) + " (error estimate " +
                                     std::to_string(r.error_estimate) + ")");
    }
    return r;
}

}  // namespace lzd
