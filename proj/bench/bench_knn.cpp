#include <array>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "cte/graph.hpp"
#include "cte/knn.hpp"
#include "cte/synthgen.hpp"

using namespace cte;

namespace {

struct Fixture {
    PointSet joint;
    BlockLayout layout;
};

Fixture make_fixture(std::size_t n, std::size_t extra)
{
    const JointSamples g = pad_noise_dims(
        gaussian_samples(GaussianSpec::three_variable_example(), n, 1), extra, 0.05, 2);
    const std::array<const PointSet*, 3> blocks{&g.x, &g.y, &*g.z};
    const std::array<std::size_t, 3> dims{g.x.dim(), g.y.dim(), g.z->dim()};
    return {hstack(blocks), BlockLayout::from_dims(dims)};
}

constexpr std::array<Projection, 3> kCmiProjections{0b101, 0b110, 0b100};

void BM_SerialCounts(benchmark::State& state)
{
    const Fixture f = make_fixture(static_cast<std::size_t>(state.range(0)),
                                   static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::neighbor_counts(f.joint, f.layout, kCmiProjections, 3));
    }
}

void BM_ParallelCounts(benchmark::State& state)
{
    const Fixture f = make_fixture(static_cast<std::size_t>(state.range(0)),
                                   static_cast<std::size_t>(state.range(1)));
    omp_set_num_threads(static_cast<int>(state.range(2)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(parallel::neighbor_counts(f.joint, f.layout, kCmiProjections, 3));
    }
}

void BM_ScoreAllPairs(benchmark::State& state)
{
    const auto streams = planted_streams(random_planted_spec(
        static_cast<std::size_t>(state.range(0)), 3, 0.5, 300, 1));
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(score_all_pairs(streams, EstimatorConfig{}, 100));
    }
}

} // namespace

BENCHMARK(BM_SerialCounts)->Args({500, 0})->Args({2000, 0})->Args({400, 149})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParallelCounts)
    ->Args({500, 0, 1})
    ->Args({2000, 0, 1})
    ->Args({2000, 0, 4})
    ->Args({400, 149, 1})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreAllPairs)->Args({10, 1})->Args({10, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
