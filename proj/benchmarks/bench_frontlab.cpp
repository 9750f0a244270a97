#include <benchmark/benchmark.h>

#include <cmath>

#include "frontlab/dispersion.hpp"
#include "frontlab/model.hpp"
#include "frontlab/simulate.hpp"
#include "frontlab/waves.hpp"

using namespace frontlab;

static void BM_NonlocalConvolutionStep(benchmark::State& state) {
    sim::Grid1D grid(0.0, 400.0, 4001);
    model::ModelSpec spec{model::ScalarNonlocal{model::NonlinearityFamily::fisher_kpp(),
                                                model::KernelSpec::uniform(1.0, grid.h())}};
    auto config = sim::default_stepper(spec, grid);
    auto field = sim::init_front(grid, spec, {sim::InitialProfile::step, 10.0, 0, 1.0, 1.0});
    for (auto _ : state) {
        sim::step(field, spec, grid, config);
        benchmark::DoNotOptimize(field.components[0].data());
    }
}
BENCHMARK(BM_NonlocalConvolutionStep);

static void BM_LVImexStep(benchmark::State& state) {
    sim::Grid1D grid(0.0, 400.0, 4001);
    model::ModelSpec spec{model::LVSystem{model::LVParams(0.5, 0.5, 50.0, 1.0)}};
    auto config = sim::default_stepper(spec, grid);
    auto field =
        sim::init_front(grid, spec, {sim::InitialProfile::step, 10.0, 0, 1.0, 2.0 / 3.0});
    for (auto _ : state) {
        sim::step(field, spec, grid, config);
        benchmark::DoNotOptimize(field.components[0].data());
    }
}
BENCHMARK(BM_LVImexStep);

static void BM_ScalarShoot(benchmark::State& state) {
    auto family = model::NonlinearityFamily::hadeler_rothe(3.0);
    for (auto _ : state) {
        auto result = waves::scalar_wave_shoot(family, 2.1);
        benchmark::DoNotOptimize(result.outcome);
    }
}
BENCHMARK(BM_ScalarShoot);

static void BM_LVFreeSpeedSolve(benchmark::State& state) {
    model::LVParams params(0.5, 0.5, 1.0, 1.0);
    auto grid = waves::recommended_lv_grid(params, std::sqrt(2.0));
    for (auto _ : state) {
        auto wave = waves::lv_wave_minimal(params, grid);
        benchmark::DoNotOptimize(wave.c);
    }
}
BENCHMARK(BM_LVFreeSpeedSolve);

static void BM_KernelMoment(benchmark::State& state) {
    auto kernel = model::KernelSpec::uniform(1.0, 1.0 / 512.0);
    double l = 0.0;
    for (auto _ : state) {
        l += 1e-6;
        benchmark::DoNotOptimize(model::kernel_moment(kernel, 1.0 + l));
    }
}
BENCHMARK(BM_KernelMoment);

BENCHMARK_MAIN();
