#include <benchmark/benchmark.h>

#include "rdmodal/dictionary.hpp"
#include "rdmodal/rng.hpp"
#include "rdmodal/somp.hpp"

using namespace rdmodal;

static void BM_SompHarmonic(benchmark::State& state)
{
    const auto length = static_cast<std::size_t>(state.range(0));
    const auto cols = static_cast<Eigen::Index>(state.range(1));
    const auto dict = harmonic_dictionary(uniform_freq_grid(50), length);
    Rng rng(3);
    ComplexMatrix y(static_cast<Eigen::Index>(length), cols);
    for (Eigen::Index j = 0; j < y.cols(); ++j)
        for (Eigen::Index i = 0; i < y.rows(); ++i)
            y(i, j) = rng.complex_normal(1.0);
    SompConfig cfg;
    cfg.max_iter = 2;
    for (auto _ : state)
        benchmark::DoNotOptimize(somp(y, dict, cfg));
}
BENCHMARK(BM_SompHarmonic)->Args({8, 64})->Args({64, 16})->Args({512, 16});

static void BM_Dicref(benchmark::State& state)
{
    const auto grid = uniform_freq_grid(50);
    const std::size_t active[] = {7};
    for (auto _ : state)
        benchmark::DoNotOptimize(dicref(grid, active, 21));
}
BENCHMARK(BM_Dicref);
