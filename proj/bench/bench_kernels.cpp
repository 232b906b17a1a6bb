// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "support.hpp"
#include "sweat/association.hpp"
#include "sweat/kernels.hpp"

using namespace sweat;
namespace k = sweat::kernels;

namespace {

struct Pooled {
    std::vector<double> values;
    k::PartitionProblem problem;

    explicit Pooled(std::size_t n) : values(2 * n) {
        std::mt19937_64 rng(n);
        std::normal_distribution<double> nd;
        for (auto& v : values) v = nd(rng);
        const double g1 = std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
        const double total = std::accumulate(values.begin(), values.end(), 0.0);
        problem = {values, n, 2.0 * g1 - total, 1e-12};
    }
};

const EmbeddingSpace& big_space() {
    static const EmbeddingSpace space = testing::random_space("bench", 50'000, 100, 1);
    return space;
}

k::RowsView view(const EmbeddingSpace& s) { return {s.data(), s.norms(), s.dimension()}; }

void ExactSerial(benchmark::State& state) {
    Pooled p(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(k::count_exact_serial(p.problem));
}

void ExactParallel(benchmark::State& state) {
    Pooled p(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(k::count_exact_parallel(p.problem));
}

void SampledSerial(benchmark::State& state) {
    Pooled p(12);
    const auto draws = draw_partitions(24, 12, static_cast<std::uint64_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(k::count_sampled_serial(p.problem, draws));
}

void SampledParallel(benchmark::State& state) {
    Pooled p(12);
    const auto draws = draw_partitions(24, 12, static_cast<std::uint64_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(k::count_sampled_parallel(p.problem, draws));
}

void DrawPartitions(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(draw_partitions(24, 12, static_cast<std::uint64_t>(state.range(0)), 7));
}

void NearestSerial(benchmark::State& state) {
    const auto& s = big_space();
    for (auto _ : state) benchmark::DoNotOptimize(k::nearest_row_serial(view(s), s.words(), s.row(123)));
}

void NearestParallel(benchmark::State& state) {
    const auto& s = big_space();
    for (auto _ : state) benchmark::DoNotOptimize(k::nearest_row_parallel(view(s), s.words(), s.row(123)));
}

std::vector<std::size_t> first_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

void CosineBlockSerial(benchmark::State& state) {
    const auto& s = big_space();
    const auto q = first_rows(static_cast<std::size_t>(state.range(0))), t = first_rows(20);
    for (auto _ : state) benchmark::DoNotOptimize(k::cosine_block_serial(view(s), q, view(s), t));
}

void CosineBlockParallel(benchmark::State& state) {
    const auto& s = big_space();
    const auto q = first_rows(static_cast<std::size_t>(state.range(0))), t = first_rows(20);
    for (auto _ : state) benchmark::DoNotOptimize(k::cosine_block_parallel(view(s), q, view(s), t));
}

} // namespace

BENCHMARK(ExactSerial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(ExactParallel)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(SampledSerial)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(SampledParallel)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(DrawPartitions)->Arg(10'000)->Unit(benchmark::kMillisecond);
BENCHMARK(NearestSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(NearestParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(CosineBlockSerial)->Arg(12)->Arg(1000)->Unit(benchmark::kMicrosecond);
BENCHMARK(CosineBlockParallel)->Arg(12)->Arg(1000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
