#include <benchmark/benchmark.h>

#include <numbers>

#include "lzd/dynamics.hpp"
#include "lzd/entanglement.hpp"

using namespace lzd;

namespace {

BathParams ohmic(double T, double theta, double delta) {
    BathParams b;
    b.temperature = T;
    b.angle = theta;
    b.cutoff = delta / 3.0;
    return b;
}

Mat4 sample_density() {
    PauliState st = schmidt_initial(0.4);
    st.chi[0][0] *= 0.7;
    st.chi[1][1] *= 0.7;
    return assemble_density(st);
}

}  // namespace

static void BM_HermitianEigenvalues4(benchmark::State& state) {
    const Mat4 pt = partial_transpose_second(sample_density());
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(pt));
}
BENCHMARK(BM_HermitianEigenvalues4);

static void BM_PositiveDefinite4(benchmark::State& state) {
    const Mat4 pt = partial_transpose_second(sample_density()) + 1e-6 * Mat4::identity();
    for (auto _ : state) benchmark::DoNotOptimize(is_positive_definite(pt));
}
BENCHMARK(BM_PositiveDefinite4);

static void BM_Negativity(benchmark::State& state) {
    const Mat4 rho = sample_density();
    for (auto _ : state) benchmark::DoNotOptimize(negativity(rho).value);
}
BENCHMARK(BM_Negativity);

static void BM_Coefficients(benchmark::State& state) {
    const LZParams p{10.0, 1.0};
    const BathParams b = ohmic(2.0, 0.3, p.delta);
    double t = -5.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(coefficients(t, p, b));
        t += 1e-3;
    }
}
BENCHMARK(BM_Coefficients);

static void BM_LambShift(benchmark::State& state) {
    const BathParams b = ohmic(1.0, 0.0, 10.0);
    for (auto _ : state) benchmark::DoNotOptimize(lamb_shift_coefficient(20.0, b).value);
}
BENCHMARK(BM_LambShift)->Unit(benchmark::kMicrosecond);

static void BM_PauliRhs(benchmark::State& state) {
    const auto c = make_coefficients(10.0, 1e-3, 1e-4, 2e-3, -0.05);
    ode::State<12> y{};
    for (std::size_t i = 0; i < 12; ++i) y[i] = 0.1 * static_cast<double>(i);
    const Vec3 r{0.0, 0.0, 0.3};
    for (auto _ : state) benchmark::DoNotOptimize(pauli_rhs(c, y, r));
}
BENCHMARK(BM_PauliRhs);

static void BM_LiftGenerator(benchmark::State& state) {
    const auto c = make_coefficients(10.0, 1e-3, 1e-4, 2e-3, -0.05);
    const Mat4 rho = sample_density();
    for (auto _ : state) benchmark::DoNotOptimize(lift_generator(rho, c));
}
BENCHMARK(BM_LiftGenerator);

static void BM_EvolveNumeric(benchmark::State& state) {
    const LZParams p{static_cast<double>(state.range(0)), 1.0};
    const BathParams b = ohmic(1.0, 0.5, p.delta);
    const auto grid = uniform_grid(-40.0, 40.0, 81);
    const PauliState bell = schmidt_initial(std::numbers::pi / 4);
    for (auto _ : state) benchmark::DoNotOptimize(evolve_numeric(bell, -40.0, 40.0, p, b, grid).negativity.back());
}
BENCHMARK(BM_EvolveNumeric)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_EvolveCorotating(benchmark::State& state) {
    const LZParams p{static_cast<double>(state.range(0)), 1.0};
    const BathParams b = ohmic(1.0, 0.5, p.delta);
    const auto grid = uniform_grid(-40.0, 40.0, 81);
    const PauliState bell = schmidt_initial(std::numbers::pi / 4);
    SolverOptions o;
    o.frame = Frame::corotating;
    for (auto _ : state)
        benchmark::DoNotOptimize(evolve_numeric(bell, -40.0, 40.0, p, b, grid, o).negativity.back());
}
BENCHMARK(BM_EvolveCorotating)->Arg(1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_EvolveFullMaster(benchmark::State& state) {
    const LZParams p{static_cast<double>(state.range(0)), 1.0};
    const BathParams b = ohmic(1.0, 0.5, p.delta);
    const auto grid = uniform_grid(-40.0, 40.0, 81);
    const PauliState bell = schmidt_initial(std::numbers::pi / 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(evolve_full_master(bell, -40.0, 40.0, p, b, grid).negativity.back());
}
BENCHMARK(BM_EvolveFullMaster)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
