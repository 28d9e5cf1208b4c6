#include "lzd/lz_model.hpp"

#include <cmath>
#include <stdexcept>

namespace lzd {

void LZParams::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("LZParams: delta must be positive");
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("LZParams: v must be positive");
}

double gap(double t, const LZParams& p) { return std::hypot(p.v * t, p.delta); }

double mixing_angle(double t, const LZParams& p) { return 0.5 * std::atan2(p.delta, p.v * t); }

double mixing_angle_rate(double t, const LZParams& p) {
    const double omega = gap(t, p);
    return -p.delta * p.v / (2.0 * omega * omega);
}

Mat2 hamiltonian_lab(double t, const LZParams& p) { return p.delta * pauli::x() + (p.v * t) * pauli::z(); }

Mat2 rotation(double t, const LZParams& p) {
    const double phi = mixing_angle(t, p);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Mat2 r;
    r(0, 0) = c;
    r(0, 1) = s;
    r(1, 0) = -s;
    r(1, 1) = c;
    return r;
}

TransitionFrequencies transition_frequencies(double t, const LZParams& p) {
    const double omega = gap(t, p);
    return {2.0 * omega, -2.0 * omega, 0.0};
}

}  // namespace lzd
