#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lzd/bath.hpp"

using namespace lzd;

namespace {

BathParams ohmic(double temperature, double cutoff = 10.0 / 3.0) {
    BathParams b;
    b.temperature = temperature;
    b.cutoff = cutoff;
    return b;
}

// Independent route for the Lamb shift: subtract gamma(w) at the pole and integrate the
// regular remainder, adding the logarithm of the removed 1 / (w - nu) piece analytically.
double lamb_by_subtraction(double w, const BathParams& b) {
    BathParams smooth = b;
    smooth.dephasing = DephasingModel::ohmic_limit;
    const double L = b.pv_window();
    const double gw = kossakowski_rate(w, smooth);
    const double h = 1e-6;
    const double slope = (kossakowski_rate(w + h, smooth) - kossakowski_rate(w - h, smooth)) / (2 * h);
    auto reg = [&](double nu) { return nu == w ? -slope : (kossakowski_rate(nu, smooth) - gw) / (w - nu); };
    const std::array<double, 2> cuts{std::min(0.0, w), std::max(0.0, w)};
    const auto r = quad::integrate(reg, -L, L, cuts, {1e-11, 1e-10, 30});
    return (r.value + gw * std::log((w + L) / (L - w))) / (2 * std::numbers::pi);
}

}  // namespace

TEST_CASE("bath parameter validation") {
    CHECK_NOTHROW(BathParams{}.validate());
    BathParams b;
    b.temperature = -1;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    b = BathParams{};
    b.cutoff = 0;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    b = BathParams{};
    b.coupling = 0;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    CHECK(BathParams{}.pv_window() == doctest::Approx(500.0 / 3.0));
}

TEST_CASE("Ohmic spectral density") {
    const BathParams b = ohmic(0.0);
    CHECK(spectral_density(0.0, b) == 0.0);
    CHECK(spectral_density(20.0, b) == doctest::Approx(20.0 * std::exp(-6.0)).epsilon(1e-15));
    CHECK_THROWS_AS(spectral_density(-1.0, b), std::invalid_argument);
}

TEST_CASE("Bose occupation") {
    CHECK(mean_occupation(3.0, 0.0) == 0.0);
    CHECK(mean_occupation(2.0, 1.0) == doctest::Approx(1.0 / (std::exp(2.0) - 1.0)).epsilon(1e-15));
    CHECK(mean_occupation(1e-9, 1.0) == doctest::Approx(1e9).epsilon(1e-8));
    CHECK_THROWS_AS(mean_occupation(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(mean_occupation(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("Kossakowski rates") {
    const BathParams cold = ohmic(0.0);
    CHECK(kossakowski_rate(20.0, cold) == doctest::Approx(0.31148918513138963711).epsilon(1e-14));
    CHECK(kossakowski_rate(-20.0, cold) == 0.0);
    CHECK(kossakowski_rate(0.0, cold) == 0.0);

    const BathParams warm = ohmic(2.0);
    CHECK(kossakowski_rate(1e-8, warm) == doctest::Approx(12.566370608075987635).epsilon(1e-12));
    CHECK(kossakowski_rate(0.0, warm) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-15));
    const double up = kossakowski_rate(20.0, warm);
    const double down = kossakowski_rate(-20.0, warm);
    CHECK(up / down == doctest::Approx(std::exp(10.0)).epsilon(1e-12));
    CHECK(up - down == doctest::Approx(2 * std::numbers::pi * spectral_density(20.0, warm)).epsilon(1e-14));

    BathParams off = warm;
    off.dephasing = DephasingModel::vanishing;
    CHECK(kossakowski_rate(0.0, off) == 0.0);
    CHECK(kossakowski_rate(5.0, off) == kossakowski_rate(5.0, warm));
}

TEST_CASE("Lamb shift reference values") {
    const BathParams cold = ohmic(0.0);
    const double s_plus = lamb_shift_coefficient(20.0, cold).value;
    const double s_minus = lamb_shift_coefficient(-20.0, cold).value;
    CHECK(s_plus == doctest::Approx(0.92961286829853883).epsilon(1e-9));
    CHECK(s_minus == doctest::Approx(-0.42798074865559549).epsilon(1e-9));
    CHECK(s_plus - s_minus == doctest::Approx(1.3575936169541343).epsilon(1e-9));

    const BathParams warm = ohmic(2.0);
    CHECK(lamb_shift_coefficient(20.0, warm).value == doctest::Approx(1.2778053397085734).epsilon(1e-9));
    CHECK(lamb_shift_coefficient(-20.0, warm).value == doctest::Approx(-0.77617322006563006).epsilon(1e-9));

    const BathParams t1 = ohmic(1.0);
    CHECK(lamb_shift_coefficient(5.0, t1).value == doctest::Approx(0.85621061380782444).epsilon(1e-9));
    CHECK(lamb_shift_coefficient(0.0, t1).value == doctest::Approx(-10.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("Lamb shift agrees with the subtraction route") {
    for (double T : {0.0, 0.5, 3.0}) {
        const BathParams b = ohmic(T);
        for (double w : {-25.0, -4.0, 0.7, 12.0, 40.0}) {
            const double direct = lamb_shift_coefficient(w, b).value;
            CHECK(direct == doctest::Approx(lamb_by_subtraction(w, b)).epsilon(1e-7));
        }
    }
}

TEST_CASE("Lamb shift converges as the window widens") {
    // Richardson on L: the truncated tail decays like exp(-L / w_c), so 30 and 50 cutoffs agree.
    BathParams b = ohmic(1.0);
    b.pv_upper_limit = 30.0 * b.cutoff;
    const double narrow = lamb_shift_coefficient(20.0, b).value;
    b.pv_upper_limit = 50.0 * b.cutoff;
    const double wide = lamb_shift_coefficient(20.0, b).value;
    CHECK(narrow == doctest::Approx(wide).epsilon(1e-9));
}

TEST_CASE("Lamb shift reports its error estimate") {
    const auto r = lamb_shift_coefficient(3.0, ohmic(0.5));
    CHECK(r.converged);
    CHECK(r.error_estimate <= 1e-6 * std::abs(r.value));
    CHECK(r.evaluations > 0);
}
