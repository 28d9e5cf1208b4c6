// generator.hpp: rotated-frame Lindblad generator of the dissipative Landau-Zener qubit

#pragma once

#include <array>
#include <vector>

#include "lzd/bath.hpp"
#include "lzd/linalg.hpp"
#include "lzd/lz_model.hpp"

namespace lzd {

/// Coefficients of
///   L[rho] = -i[k sz - phi_dot sy, rho] + f D[s-] rho + g D[s+] rho + l (sz rho sz - rho)
/// with the coupling lambda^2 already folded into f, g, l.
struct GeneratorCoefficients {
    double k{0.0};
    double f{0.0};
    double g{0.0};
    double l{0.0};
    double a_plus{0.0};   ///< (f + g) / 2
    double a_minus{0.0};  ///< (f - g) / 2
    double b{0.0};        ///< a_plus + 2 l
    double phi_dot{0.0};
};

/// Fills a_plus, a_minus and b from the primary rates.
GeneratorCoefficients make_coefficients(double k, double f, double g, double l, double phi_dot);

/// Instantaneous coefficients; the Lamb shift is evaluated by direct quadrature when enabled.
GeneratorCoefficients coefficients(double t, const LZParams& p, const BathParams& b);

/// Coefficients frozen at phi = pi/4, Omega = delta, phi_dot = 0 (slow driving, |v t| << delta).
GeneratorCoefficients slow_limit_coefficients(const LZParams& p, const BathParams& b);

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

/// Affine Bloch-vector dynamics ds/dt = Q s + q.
struct BlochGenerator {
    Mat3 Q{};
    Vec3 q{};
};

BlochGenerator bloch_matrix(const GeneratorCoefficients& c);
BlochGenerator bloch_matrix(double t, const LZParams& p, const BathParams& b);

/// L[rho]. Linear in rho; any 2x2 operator is accepted (the bipartite lift feeds it
/// non-Hermitian blocks).
Mat2 apply_generator(const Mat2& rho, const GeneratorCoefficients& c);
Mat2 apply_generator(const Mat2& rho, double t, const LZParams& p, const BathParams& b);

inline constexpr double default_secular_threshold = 10.0;

struct TimescaleReport {
    double tau_s{0.0};  ///< intrinsic beat 1 / (2 Omega)
    double tau_r{0.0};  ///< relaxation 1 / gamma(2 Omega), without lambda^2
    double tau_a{0.0};  ///< temporal change of H(t)
    double margin{0.0}; ///< min(tau_r, tau_a) / tau_s
    bool secular_ok{false};
};

/// The effective relaxation time is tau_r / lambda^2; the report keeps the bare
/// expression. Within 1% of the seam t = delta / v the smaller tau_a branch is used.
TimescaleReport timescales(double t, const LZParams& p, const BathParams& b,
                           double threshold = default_secular_threshold);

/// Coefficient source for one propagation window. When the Lamb shift is enabled
/// S(2 Omega) - S(-2 Omega) is tabulated once over the gaps reached inside
/// [t_min, t_max] and interpolated; otherwise this is coefficients() verbatim.
/// Immutable after construction, so one instance may be shared across threads.
class GeneratorModel {
public:
    GeneratorModel(const LZParams& p, const BathParams& b, double t_min, double t_max);

    GeneratorCoefficients coefficients(double t) const;
    const LZParams& lz() const { return lz_; }
    const BathParams& bath() const { return bath_; }

    /// Interpolated S(2 Omega) - S(-2 Omega); zero when the Lamb shift is disabled.
    double lamb_shift_difference(double omega) const;

private:
    LZParams lz_;
    BathParams bath_;
    double log_lo_{0.0};
    double log_step_{0.0};
    std::vector<double> table_;
};

}  // namespace lzd
