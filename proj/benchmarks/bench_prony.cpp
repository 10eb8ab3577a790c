#include <benchmark/benchmark.h>

#include "sprony/fixtures.hpp"
#include "sprony/prony.hpp"
#include "sprony/stability.hpp"

using namespace sprony;

namespace
{

PronyParameters spaced(std::size_t L)
{
    PronyParameters p;
    for (std::size_t l = 0; l < L; ++l)
    {
        p.nodes.push_back(Real(0.1) + Real(0.8) * Real(l) / Real(L));
        p.amplitudes.emplace_back(Real(1) / Real(l + 1));
    }
    return p;
}

void BM_Reconstruct(benchmark::State& state)
{
    const std::size_t L     = static_cast<std::size_t>(state.range(0));
    const PronyParameters p = spaced(L);
    SampleWindow w;
    w.step   = p.step;
    w.values = prony_samples(p, 2 * L);
    for (auto _ : state)
        benchmark::DoNotOptimize(reconstruct(w, L));
}
BENCHMARK(BM_Reconstruct)->DenseRange(1, 8);

void BM_KappaExp(benchmark::State& state)
{
    const PronyParameters p = spaced(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kappa_exp(prony_jacobian(p)));
}
BENCHMARK(BM_KappaExp)->DenseRange(1, 8);

void BM_Collapse(benchmark::State& state)
{
    const Fixture fx = fixture_ex6();
    for (auto _ : state)
        benchmark::DoNotOptimize(collapse(fx.spec));
}
BENCHMARK(BM_Collapse);

void BM_SweepLevel(benchmark::State& state)
{
    const Fixture fx = fixture_ex6();
    for (auto _ : state)
        benchmark::DoNotOptimize(noise_sweep(fx.spec, fx.h, fx.L, {Real(1e-6)}, 50, 7));
}
BENCHMARK(BM_SweepLevel)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
