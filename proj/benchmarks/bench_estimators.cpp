#include <benchmark/benchmark.h>

#include "rdmodal/mtsm.hpp"
#include "rdmodal/presets.hpp"
#include "rdmodal/stsm.hpp"

using namespace rdmodal;

namespace {

ComplexTensor noisy(SignalSpec spec, double snr_db)
{
    const auto clean = synthesize(spec);
    return add_noise(clean, NoiseSpec{sigma_for_snr(clean, snr_db), 11});
}

}  // namespace

static void BM_StsmSignal1(benchmark::State& state)
{
    const auto y = noisy(preset("signal1"), 20.0);
    const MultigridConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(stsm_mode(y, cfg));
}
BENCHMARK(BM_StsmSignal1)->Unit(benchmark::kMillisecond);

static void BM_MtsmLeadingSize(benchmark::State& state)
{
    auto spec = preset("signal2");
    spec.sizes = {static_cast<std::size_t>(state.range(0)), 4, 4};
    const auto y = noisy(spec, 20.0);
    MtsmConfig cfg;
    cfg.f_modes = spec.modes.size();
    for (auto _ : state)
        benchmark::DoNotOptimize(mtsm(y, cfg));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MtsmLeadingSize)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond)->Complexity();
