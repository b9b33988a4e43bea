#include <random>

#include <benchmark/benchmark.h>

#include "sdmce/unfolding.hpp"

namespace
{

using namespace sdmce;

void BM_ConvexWeights(benchmark::State& state)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    const auto k = static_cast<Eigen::Index>(state.range(0));
    Eigen::MatrixX3d ring(k, 3);
    for (Eigen::Index i = 0; i < ring.size(); ++i) {
        ring.data()[i] = g(rng);
    }
    const Eigen::Vector3d v = ring.colwise().mean().transpose();
    for (auto _ : state) {
        benchmark::DoNotOptimize(convex_weights(v, ring));
    }
}
BENCHMARK(BM_ConvexWeights)->Arg(3)->Arg(6)->Arg(12);

}  // namespace
