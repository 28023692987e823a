#include <benchmark/benchmark.h>

#include "nadc/adc_core.hpp"
#include "nadc/metrics.hpp"
#include "nadc/oracle.hpp"
#include "nadc/reconstruction.hpp"
#include "nadc/signal.hpp"

using namespace nadc;

namespace {

AdcConfig fast_config()
{
    AdcConfig cfg;
    cfg.refractory = RefractoryModel::constant(100e-9);
    return cfg;
}

} // namespace

static void BM_Simulate(benchmark::State &state)
{
    const double f = static_cast<double>(state.range(0));
    const auto w = make_sinusoid(0.64, f, 0.0, 10.0 / f, 2000.0 * f);
    const auto cfg = fast_config();
    std::size_t events = 0;
    for (auto _ : state)
    {
        const auto trace = simulate(w, cfg);
        events = trace.spikes.events.size();
        benchmark::DoNotOptimize(events);
    }
    state.counters["events"] = static_cast<double>(events);
}
BENCHMARK(BM_Simulate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_SimulateDense(benchmark::State &state)
{
    const auto w = make_sinusoid(0.64, 10e3, 0.0, 1e-3, 20e6);
    const auto cfg = fast_config();
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(simulate_dense(w, cfg, cfg.dt / 10.0));
    }
}
BENCHMARK(BM_SimulateDense)->Unit(benchmark::kMillisecond);

static void BM_InterpolatePoly5(benchmark::State &state)
{
    const auto w = make_sinusoid(0.64, 1e3, 0.0, 10e-3, 2e6);
    const auto cfg = fast_config();
    const auto trace = simulate(w, cfg);
    const auto pts = levels_from_spikes(trace.spikes, cfg.lsb(), trace.initial_reference);
    const double rate = coherent_grid_rate(1e3, w.duration());
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(interpolate_poly5(pts, rate, w.duration()));
    }
    state.counters["points"] = static_cast<double>(pts.size());
}
BENCHMARK(BM_InterpolatePoly5)->Unit(benchmark::kMillisecond);

static void BM_Sndr(benchmark::State &state)
{
    const auto n = static_cast<double>(state.range(0));
    const double f = 1e3;
    const double duration = 10.0 / f;
    const auto w = make_sinusoid(0.64, f, 0.0, duration, n / duration);
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(sndr(w, f));
    }
}
BENCHMARK(BM_Sndr)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
