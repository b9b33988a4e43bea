#include <benchmark/benchmark.h>

#include "sdmce/laplacian.hpp"
#include "sdmce/shapes.hpp"

namespace
{

using namespace sdmce;

void BM_BuildLaplacian(benchmark::State& state)
{
    const TriMesh mesh = shapes::make_polar_disk(static_cast<int>(state.range(0)), shapes::Surface::hemisphere);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_laplacian(mesh));
    }
    state.counters["vertices"] = mesh.vertex_count();
}
BENCHMARK(BM_BuildLaplacian)->Arg(13)->Arg(26)->Arg(52)->Unit(benchmark::kMicrosecond);

void BM_SchurSetup(benchmark::State& state)
{
    const TriMesh mesh = shapes::make_polar_disk(static_cast<int>(state.range(0)), shapes::Surface::hemisphere);
    const SparseMatrix L = build_laplacian(mesh);
    const auto mode = state.range(1) ? SchurMode::implicit : SchurMode::explicit_dense;
    for (auto _ : state) {
        BlockSystem sys(L, mesh.boundary_loop(), mode);
        benchmark::DoNotOptimize(sys);
    }
}
BENCHMARK(BM_SchurSetup)
    ->ArgsProduct({{13, 26, 52}, {0, 1}})
    ->ArgNames({"rings", "implicit"})
    ->Unit(benchmark::kMillisecond);

void BM_SchurApply(benchmark::State& state)
{
    const TriMesh mesh = shapes::make_polar_disk(static_cast<int>(state.range(0)), shapes::Surface::hemisphere);
    const SparseMatrix L = build_laplacian(mesh);
    const BlockSystem sys(L, mesh.boundary_loop(), state.range(1) ? SchurMode::implicit : SchurMode::explicit_dense);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(sys.boundary_size(), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sys.apply_schur(x));
    }
}
BENCHMARK(BM_SchurApply)
    ->ArgsProduct({{13, 26, 52}, {0, 1}})
    ->ArgNames({"rings", "implicit"})
    ->Unit(benchmark::kMicrosecond);

}  // namespace
