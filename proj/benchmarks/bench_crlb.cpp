#include <benchmark/benchmark.h>

#include "rdmodal/crlb.hpp"
#include "rdmodal/presets.hpp"

using namespace rdmodal;

static void BM_CrlbGeneral(benchmark::State& state)
{
    const auto spec = preset(state.range(0) == 2 ? "signal2" : "signal4");
    const auto theta = ThetaVector::from_modes(spec.modes);
    for (auto _ : state)
        benchmark::DoNotOptimize(crlb_general(theta, 0.1, spec.sizes));
}
BENCHMARK(BM_CrlbGeneral)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

static void BM_CrlbSingleMode(benchmark::State& state)
{
    const std::vector<std::size_t> sizes{64, 64};
    const double alpha[] = {-0.01, -0.02};
    for (auto _ : state)
        benchmark::DoNotOptimize(crlb_single_mode(alpha, sizes, 1.0, 0.1));
}
BENCHMARK(BM_CrlbSingleMode);
