#include "relaxrd/models.hpp"
#include "relaxrd/relax.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace relaxrd;

void step_with(benchmark::State& state, const Problem& p, const SchemeConfig& cfg, int mx, int my)
{
    RelaxStepper st(p, Mesh::make(p, cfg, mx, my), cfg);
    RelaxState s = st.initial_state();
    const double dt = st.stable_dt(s);
    for (auto _ : state) {
        st.step(s, dt);
        benchmark::DoNotOptimize(s.u.data());
    }
    state.SetItemsProcessed(state.iterations() * mx * (my > 0 ? my : 1));
}

void BM_HeatEno3Rk2(benchmark::State& state)
{
    step_with(state, heat_problem(), SchemeConfig::make(ReconstructionKind::eno(3), 2), static_cast<int>(state.range(0)), 0);
}
BENCHMARK(BM_HeatEno3Rk2)->Arg(108)->Arg(324)->Arg(972);

void BM_HeatWeno5Rk3(benchmark::State& state)
{
    step_with(state, heat_problem(), SchemeConfig::make(ReconstructionKind::weno(5), 3), static_cast<int>(state.range(0)), 0);
}
BENCHMARK(BM_HeatWeno5Rk3)->Arg(108)->Arg(972);

void BM_TravellingWave(benchmark::State& state)
{
    SchemeConfig cfg = SchemeConfig::make(ReconstructionKind::eno(3), 2);
    cfg.gradient_order = 6;
    cfg.phi = PhiPolicy::fixed(0.01);
    step_with(state, genfk_problem(1.0, 2.0, 2.0), cfg, static_cast<int>(state.range(0)), 0);
}
BENCHMARK(BM_TravellingWave)->Arg(300);

void BM_Extinction2D(benchmark::State& state)
{
    const int m = static_cast<int>(state.range(0));
    step_with(state, extinction_problem(), SchemeConfig::make(ReconstructionKind::eno(3), 2), m, m);
}
BENCHMARK(BM_Extinction2D)->Arg(64)->Arg(128);

void BM_Frog(benchmark::State& state)
{
    step_with(state, frog_problem(FrogParameters{}), SchemeConfig::make(ReconstructionKind::eno(3), 2), 400, 0);
}
BENCHMARK(BM_Frog);

} // namespace
