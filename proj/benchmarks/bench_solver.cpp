#include <benchmark/benchmark.h>

#include "sdmce/logging.hpp"
#include "sdmce/pipeline.hpp"
#include "sdmce/shapes.hpp"

namespace
{

using namespace sdmce;

void BM_SolveFixedMu(benchmark::State& state)
{
    log::set_level("error");
    const TriMesh mesh = shapes::make_polar_disk(static_cast<int>(state.range(0)), shapes::Surface::hemisphere);
    RunConfig c;
    c.mu = 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(parameterize(mesh, c));
    }
}
BENCHMARK(BM_SolveFixedMu)->Arg(13)->Arg(26)->Arg(52)->Unit(benchmark::kMillisecond);

void BM_SolveAutoMuShuffled(benchmark::State& state)
{
    log::set_level("error");
    const TriMesh mesh = shapes::make_polar_disk(static_cast<int>(state.range(0)), shapes::Surface::hemisphere);
    RunConfig c;
    c.init.kind = BoundaryInit::Kind::random_order;
    c.init.seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(parameterize(mesh, c));
    }
}
BENCHMARK(BM_SolveAutoMuShuffled)->Arg(13)->Arg(26)->Unit(benchmark::kMillisecond);

}  // namespace
