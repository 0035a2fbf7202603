#include <benchmark/benchmark.h>

#include <cmath>

#include "nlcl/local.hpp"
#include "nlcl/nonlocal.hpp"
#include "nlcl/solver.hpp"

namespace {

using namespace nlcl;

CellField wavy_state(const GridSpec& g) {
    std::vector<double> v(static_cast<size_t>(g.n_cells()));
    for (int j = 0; j < g.n_cells(); ++j) {
        v[static_cast<size_t>(j)] = 0.5 + 0.25 * std::sin(5.0 * g.center(j));
    }
    return CellField(g, std::move(v), {0.5, 0.5});
}

void BM_exponential_scan(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    GridSpec g(-2.0, 2.0, n);
    const auto q = wavy_state(g);
    const auto k = KernelSpec::exponential(0.1);
    const auto v = VelocityModel::quadratic();
    for (auto _ : state) {
        benchmark::DoNotOptimize(nonlocal_velocity_exponential_scan(q, k, v));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_exponential_scan)->Arg(10'000)->Arg(100'000)->Arg(1'000'000);

void BM_general_quadrature(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    GridSpec g(-2.0, 2.0, n);
    const auto q = wavy_state(g);
    const auto k = KernelSpec::exponential(0.1);
    const auto v = VelocityModel::quadratic();
    for (auto _ : state) {
        benchmark::DoNotOptimize(nonlocal_velocity(q, k, v));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_general_quadrature)->Arg(2'000)->Arg(8'000);

void BM_constant_kernel_window(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    GridSpec g(-2.0, 2.0, n);
    const auto q = wavy_state(g);
    const auto k = KernelSpec::constant(0.1);
    const auto v = VelocityModel::quadratic();
    for (auto _ : state) {
        benchmark::DoNotOptimize(nonlocal_velocity(q, k, v));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_constant_kernel_window)->Arg(2'000)->Arg(8'000);

void BM_nonlocal_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SolverConfig cfg;
    cfg.variant = ModelVariant::nonlocal_velocity;
    cfg.kernel = KernelSpec::exponential(0.1);
    cfg.velocity = VelocityModel::quadratic();
    cfg.grid = GridSpec(-2.0, 2.0, n);
    cfg.t_end = 50.0 * 0.5 * cfg.grid.dx() / 0.9375;  // about 50 steps
    cfg.snapshot_times = {0.0};
    const auto datum = InitialDatum::box(0.25, 0.5, -0.5, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(cfg, datum));
    }
    state.SetItemsProcessed(state.iterations() * n * 50);
}
BENCHMARK(BM_nonlocal_step)->Arg(10'000)->Arg(100'000);

void BM_godunov_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    GridSpec g(-2.0, 2.0, n);
    FluxModel fm(VelocityModel::quadratic());
    const auto datum = InitialDatum::box(0.25, 0.5, -0.5, 0.5);
    const double t_end = 50.0 * 0.5 * g.dx();  // |f'| <= 1 on [0, 1]
    for (auto _ : state) {
        benchmark::DoNotOptimize(godunov_simulate(fm, datum, g, 0.5, t_end, {0.0}));
    }
    state.SetItemsProcessed(state.iterations() * n * 50);
}
BENCHMARK(BM_godunov_step)->Arg(10'000)->Arg(100'000);

}  // namespace

BENCHMARK_MAIN();
