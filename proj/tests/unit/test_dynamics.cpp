#include <cmath>
#include <numbers>

#include "doctest.h"
#include "lzd/dynamics.hpp"
#include "lzd/entanglement.hpp"

using namespace lzd;

namespace {

BathParams bath(double T, double theta, double cutoff = 10.0 / 3.0, double lambda = 0.1) {
    BathParams b;
    b.temperature = T;
    b.angle = theta;
    b.cutoff = cutoff;
    b.coupling = lambda;
    return b;
}

SolverOptions tight(Frame frame = Frame::lab) {
    SolverOptions o;
    o.tolerances.rtol = 1e-10;
    o.tolerances.atol = 1e-12;
    o.frame = frame;
    return o;
}

// 0.8 |psi><psi| + 0.2 rho_x (x) 1/2 with a transverse system polarization
PauliState mixed_start() {
    const PauliState pure = schmidt_initial(0.3);
    PauliState st;
    for (std::size_t i = 0; i < 3; ++i) {
        st.s[i] = 0.8 * pure.s[i];
        st.r[i] = 0.8 * pure.r[i];
        for (std::size_t j = 0; j < 3; ++j) st.chi[i][j] = 0.8 * pure.chi[i][j];
    }
    st.s[0] += 0.2 * 0.6;
    return st;
}

}  // namespace

TEST_CASE("uniform grid") {
    const auto g = uniform_grid(-1.0, 1.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g[2] == 0.0);
    CHECK(g.back() == 1.0);
    CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("window and grid validation") {
    const LZParams p{1.0, 1.0};
    const std::vector<double> bad{0.0, 2.0};
    CHECK_THROWS_AS(evolve_numeric(schmidt_initial(0.5), 0.0, 1.0, p, bath(0, 0), bad), std::invalid_argument);
    const std::vector<double> unsorted{0.5, 0.2};
    CHECK_THROWS_AS(evolve_numeric(schmidt_initial(0.5), 0.0, 1.0, p, bath(0, 0), unsorted), std::invalid_argument);
    CHECK_THROWS_AS(evolve_numeric(schmidt_initial(0.5), 1.0, 1.0, p, bath(0, 0), {}), std::invalid_argument);
}

TEST_CASE("precession angle integrates twice the gap") {
    const LZParams p{3.0, 2.0};
    CHECK(precession_angle(-4.0, -4.0, p) == 0.0);
    for (double t : {-3.0, 0.0, 1.2, 7.0}) {
        const double h = 1e-5;
        const double fd = (precession_angle(t + h, -5.0, p) - precession_angle(t - h, -5.0, p)) / (2 * h);
        CHECK(fd == doctest::Approx(2 * gap(t, p)).epsilon(1e-8));
    }
}

TEST_CASE("system rotation is local and keeps negativity") {
    const PauliState st = mixed_start();
    const PauliState rot = rotate_system(st, 0.77);
    CHECK(rot.r == st.r);
    CHECK(rot.chi[2] == st.chi[2]);
    CHECK(max_abs_difference(rotate_system(rot, -0.77), st) < 1e-15);
    CHECK(negativity(rot).value == doctest::Approx(negativity(st).value).epsilon(1e-13));
}

TEST_CASE("co-rotating derivative is the rotated lab derivative minus the precession") {
    const auto c = make_coefficients(2.5, 0.03, 0.01, 0.02, -0.3);
    const Vec3 r{0.1, -0.2, 0.4};
    ode::State<12> y{};
    for (std::size_t i = 0; i < 12; ++i) y[i] = 0.05 * static_cast<double>(i) - 0.3;
    const double a = 1.234;
    // x = R(a) y;  dy/dt = R(-a) (dx/dt) - 2k J y
    PauliState ys;
    for (std::size_t i = 0; i < 3; ++i) ys.s[i] = y[i];
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) ys.chi[i][j] = y[3 + 3 * j + i];
    ys.r = r;
    const PauliState xs = rotate_system(ys, a);
    ode::State<12> x{};
    for (std::size_t i = 0; i < 3; ++i) x[i] = xs.s[i];
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) x[3 + 3 * j + i] = xs.chi[i][j];
    const auto dx = pauli_rhs(c, x, r);
    const auto dy = pauli_rhs_corotating(c, y, r, a);
    for (std::size_t col = 0; col < 4; ++col) {
        const std::size_t o = 3 * col;
        const double u = std::cos(a) * dx[o] + std::sin(a) * dx[o + 1] + 2 * c.k * y[o + 1];
        const double v = -std::sin(a) * dx[o] + std::cos(a) * dx[o + 1] - 2 * c.k * y[o];
        CHECK(dy[o] == doctest::Approx(u).epsilon(1e-13));
        CHECK(dy[o + 1] == doctest::Approx(v).epsilon(1e-13));
        CHECK(dy[o + 2] == doctest::Approx(dx[o + 2]).epsilon(1e-13));
    }
}

TEST_CASE("lab and co-rotating frames agree") {
    const LZParams p{2.0, 1.0};
    const BathParams b = bath(0.5, 0.6, 2.0 / 3.0);
    const auto grid = uniform_grid(-10.0, 10.0, 21);
    const auto lab = evolve_numeric(mixed_start(), -10.0, 10.0, p, b, grid, tight(Frame::lab));
    const auto co = evolve_numeric(mixed_start(), -10.0, 10.0, p, b, grid, tight(Frame::corotating));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(max_abs_difference(lab.states[i], co.states[i]) < 1e-7);
        CHECK(lab.negativity[i] == doctest::Approx(co.negativity[i]).epsilon(1e-7));
    }
}

TEST_CASE("co-rotating frame carries the Lamb shift phase") {
    const LZParams p{2.0, 1.0};
    BathParams b = bath(0.5, 0.6, 2.0 / 3.0, 0.3);
    b.lamb_shift_enabled = true;
    const auto grid = uniform_grid(-5.0, 5.0, 6);
    const auto lab = evolve_numeric(mixed_start(), -5.0, 5.0, p, b, grid, tight(Frame::lab));
    const auto co = evolve_numeric(mixed_start(), -5.0, 5.0, p, b, grid, tight(Frame::corotating));
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(max_abs_difference(lab.states[i], co.states[i]) < 1e-7);
}

TEST_CASE("Pauli route matches the full master equation") {
    const LZParams p{1.5, 2.0};
    for (double theta : {0.0, 0.9, std::numbers::pi / 2}) {
        const BathParams b = bath(1.2, theta, 0.5, 0.4);
        const auto grid = uniform_grid(-6.0, 6.0, 13);
        const auto pauli = evolve_numeric(mixed_start(), -6.0, 6.0, p, b, grid, tight());
        const auto full = evolve_full_master(mixed_start(), -6.0, 6.0, p, b, grid, tight());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(max_abs_difference(pauli.states[i], full.states[i]) < 1e-8);
            CHECK(full.trace_deviation[i] < 1e-10);
        }
    }
}

TEST_CASE("the lifted generator acts on the system factor only") {
    const auto c = make_coefficients(1.1, 0.2, 0.07, 0.05, 0.3);
    const PauliState st = mixed_start();
    const Mat4 rho = assemble_density(st);
    const Mat4 d = lift_generator(rho, c);
    CHECK(std::abs(d.trace()) < 1e-15);
    CHECK(hermiticity_defect(d) < 1e-15);
    // partial trace over the system: the reference marginal is frozen
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) CHECK(std::abs(d(a, b) + d(2 + a, 2 + b)) < 1e-15);
    // product operators: (L x id)(A x B) = L[A] x B
    Mat2 A;
    A(0, 0) = 0.3;
    A(0, 1) = cplx(0.2, 0.1);
    A(1, 0) = cplx(-0.4, 0.5);
    A(1, 1) = 0.7;
    const Mat2 B = pauli::y() + 0.5 * pauli::x();
    CHECK(max_abs_difference(lift_generator(kron(A, B), c), kron(apply_generator(A, c), B)) < 1e-15);
}

TEST_CASE("slow closed form matches the numerical solution") {
    const LZParams p{10.0, 1e-4};
    for (double T : {0.0, 2.0}) {
        for (double theta : {0.0, std::numbers::pi / 4}) {
            const BathParams b = bath(T, theta);
            const std::vector<double> grid{-100.0, 0.0, 100.0};
            const auto num = evolve_numeric(schmidt_initial(std::numbers::pi / 4), -100.0, 100.0, p, b, grid, tight());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto slow = evolve_slow_analytic(schmidt_initial(std::numbers::pi / 4), -100.0, grid[i], p, b);
                CHECK(slow.slow_regime_valid);
                CHECK(max_abs_difference(slow.state, num.states[i]) < 1e-3);
            }
        }
    }
    CHECK_FALSE(evolve_slow_analytic(schmidt_initial(0.5), -40.0, 40.0, LZParams{10.0, 1.0}, bath(0, 0)).slow_regime_valid);
}

TEST_CASE("reference marginal stays fixed and the trace is exact") {
    const LZParams p{1.0, 1.0};
    const PauliState init = mixed_start();
    const auto grid = uniform_grid(-5.0, 5.0, 11);
    const auto tr = evolve_numeric(init, -5.0, 5.0, p, bath(0.3, 0.4, 1.0 / 3.0), grid);
    for (const auto& st : tr.states) CHECK(st.r == init.r);
    for (double d : tr.trace_deviation) CHECK(d == 0.0);
    for (double m : tr.min_eigenvalue) CHECK(m >= -1e-9);
}

TEST_CASE("RK4 agrees with DOPRI5") {
    const LZParams p{1.0, 1.0};
    const BathParams b = bath(0.3, 0.4, 1.0 / 3.0);
    const auto grid = uniform_grid(-3.0, 3.0, 4);
    SolverOptions rk;
    rk.method = SolverMethod::rk4_fixed;
    const auto a = evolve_numeric(mixed_start(), -3.0, 3.0, p, b, grid, rk);
    const auto d = evolve_numeric(mixed_start(), -3.0, 3.0, p, b, grid, tight());
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(max_abs_difference(a.states[i], d.states[i]) < 1e-8);
}

TEST_CASE("negativity crossings") {
    const LZParams p{10.0, 1e-6};
    const BathParams b = bath(10.0, 0.0);
    const PauliState bell = schmidt_initial(std::numbers::pi / 4);
    const auto sign = first_negativity_crossing(bell, -100.0, 1e5, p, b, 0.0, tight(Frame::corotating));
    REQUIRE(sign.has_value());
    CHECK((*sign + 100.0) == doctest::Approx(survival_time(b, p)).epsilon(1e-3));

    const auto lab = first_negativity_crossing(bell, -100.0, 1e5, p, b, 1e-6, tight(Frame::lab));
    const auto co = first_negativity_crossing(bell, -100.0, 1e5, p, b, 1e-6, tight(Frame::corotating));
    REQUIRE(lab.has_value());
    REQUIRE(co.has_value());
    CHECK(*lab < *sign);
    CHECK(*lab == doctest::Approx(*co).epsilon(1e-6));

    // already below threshold at the start
    CHECK(first_negativity_crossing(schmidt_initial(0.0), -1.0, 1.0, p, b, 1e-6).value() == -1.0);
    CHECK_FALSE(first_negativity_crossing(bell, -1.0, 1.0, p, bath(0.0, 0.0), 0.0).has_value());
    CHECK_THROWS_AS(first_negativity_crossing(bell, -1.0, 1.0, p, b, -0.1), std::invalid_argument);
}

TEST_CASE("solver failures carry the time") {
    const LZParams p{1.0, 1.0};
    SolverOptions o;
    o.tolerances.max_steps = 3;
    const auto grid = uniform_grid(-5.0, 5.0, 3);
    try {
        evolve_numeric(mixed_start(), -5.0, 5.0, p, bath(0.3, 0.4, 1.0 / 3.0), grid, o);
        FAIL("expected solver_error");
    } catch (const solver_error& e) {
        CHECK(e.time() >= -5.0);
        CHECK(e.time() < 5.0);
    }
}
