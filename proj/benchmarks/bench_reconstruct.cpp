#include "relaxrd/boundary.hpp"
#include "relaxrd/findiff.hpp"
#include "relaxrd/reconstruct.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace relaxrd;

Field wave(int m, int ghost)
{
    Field u = sample(make_grid(0.0, 1.0, m, ghost), [](double x) { return std::sin(6.283185307179586 * x) + (x > 0.5); });
    fill_ghosts(u, BoundaryPair::periodic(), 2);
    return u;
}

void BM_Reconstruct(benchmark::State& state, ReconstructionKind kind)
{
    const int m = static_cast<int>(state.range(0));
    const Field u = wave(m, kind.required_ghosts());
    for (auto _ : state) {
        auto edges = reconstruct_edges(u, kind);
        benchmark::DoNotOptimize(edges);
    }
    state.SetItemsProcessed(state.iterations() * m);
}
BENCHMARK_CAPTURE(BM_Reconstruct, eno3, ReconstructionKind::eno(3))->Arg(1000);
BENCHMARK_CAPTURE(BM_Reconstruct, eno6, ReconstructionKind::eno(6))->Arg(1000);
BENCHMARK_CAPTURE(BM_Reconstruct, weno5, ReconstructionKind::weno(5))->Arg(1000);

void BM_Gradient(benchmark::State& state)
{
    const int order = static_cast<int>(state.range(0));
    Field u = sample(make_grid(0.0, 1.0, 1000, order / 2), [](double x) { return std::exp(x); });
    fill_ghosts(u, BoundaryPair::free_flow(), order);
    for (auto _ : state) {
        auto du = gradient(u, order);
        benchmark::DoNotOptimize(du);
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Gradient)->Arg(2)->Arg(4)->Arg(6);

} // namespace
