#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lzd/lz_model.hpp"

using namespace lzd;

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(LZParams{}.validate());
    CHECK_THROWS_AS((LZParams{0.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((LZParams{1.0, -1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((LZParams{std::nan(""), 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("gap") {
    const LZParams p{10.0, 1.0};
    CHECK(gap(0.0, p) == 10.0);
    CHECK(gap(-24.0, p) == doctest::Approx(26.0).epsilon(1e-15));
    CHECK(gap(1e6, LZParams{1e-3, 2.0}) == doctest::Approx(2e6).epsilon(1e-15));
}

TEST_CASE("mixing angle and its rate") {
    const LZParams p{10.0, 1.0};
    CHECK(mixing_angle(0.0, p) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
    CHECK(mixing_angle(1e9, p) == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(mixing_angle(-1e9, p) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-8));
    CHECK(mixing_angle_rate(0.0, p) == doctest::Approx(-0.05).epsilon(1e-15));
    CHECK(mixing_angle_rate(0.0, LZParams{3.0, 4.0}) == doctest::Approx(-4.0 / 6.0).epsilon(1e-15));

    // central difference of phi
    for (double t : {-30.0, -2.0, 0.0, 0.7, 15.0}) {
        const double h = 1e-5;
        const double fd = (mixing_angle(t + h, p) - mixing_angle(t - h, p)) / (2 * h);
        CHECK(mixing_angle_rate(t, p) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("rotation diagonalizes the drive") {
    const LZParams p{3.0, 2.5};
    for (double t : {-5.0, -0.4, 0.0, 1.3, 9.0}) {
        const Mat2 r = rotation(t, p);
        const Mat2 d = r * hamiltonian_lab(t, p) * r.adjoint();
        CHECK(max_abs_difference(d, gap(t, p) * pauli::z()) < 1e-13);
        CHECK(max_abs_difference(r * r.adjoint(), Mat2::identity()) < 1e-15);
    }
}

TEST_CASE("lab Hamiltonian") {
    const LZParams p{10.0, 1.0};
    const Mat2 h = hamiltonian_lab(2.0, p);
    CHECK(h(0, 0) == cplx(2.0));
    CHECK(h(1, 1) == cplx(-2.0));
    CHECK(h(0, 1) == cplx(10.0));
}

TEST_CASE("transition frequencies") {
    const auto w = transition_frequencies(0.0, LZParams{10.0, 1.0});
    CHECK(w.emission == 20.0);
    CHECK(w.absorption == -20.0);
    CHECK(w.dephasing == 0.0);
}
