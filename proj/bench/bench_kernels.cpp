// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "boxbound/oracle.hpp"
#include "boxbound/screening.hpp"
#include "support/instances.hpp"

using namespace boxbound;

namespace {

std::vector<Box> random_boxes(std::size_t count, std::size_t dim) {
    std::mt19937_64 rng(count * 31 + dim);
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    std::vector<Box> boxes;
    for (std::size_t i = 0; i < count; ++i) {
        Box b{"E" + std::to_string(i + 1), std::vector<double>(dim), std::vector<double>(dim)};
        for (std::size_t k = 0; k < dim; ++k) {
            double a = coord(rng), c = coord(rng);
            if (a > c)
                std::swap(a, c);
            b.lower[k] = a;
            b.upper[k] = c;
        }
        boxes.push_back(std::move(b));
    }
    return boxes;
}

template <bool Parallel>
void graph(benchmark::State& state) {
    const auto boxes = random_boxes(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        auto g = Parallel ? build_graph(boxes, EmptinessMode::PositiveMeasure)
                          : serial::build_graph(boxes, EmptinessMode::PositiveMeasure);
        benchmark::DoNotOptimize(g);
    }
}

template <bool Parallel>
void cells(benchmark::State& state) {
    const auto boxes = random_boxes(static_cast<std::size_t>(state.range(0)), 3);
    const auto measure = ProductMeasure::uniform({0, 0, 0}, {10, 10, 10});
    for (auto _ : state) {
        auto d = Parallel ? exact_count_distribution(boxes, measure)
                          : serial::exact_count_distribution(boxes, measure);
        benchmark::DoNotOptimize(d);
    }
}

template <bool Parallel>
void monte_carlo(benchmark::State& state) {
    const auto boxes = testing::example2_boxes();
    const auto measure = testing::example2_measure();
    const auto samples = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto e = Parallel ? monte_carlo_union(boxes, measure, samples, 1)
                          : serial::monte_carlo_union(boxes, measure, samples, 1);
        benchmark::DoNotOptimize(e);
    }
}

}  // namespace

BENCHMARK(graph<false>)->Name("graph/serial")->Arg(200)->Arg(1000);
BENCHMARK(graph<true>)->Name("graph/parallel")->Arg(200)->Arg(1000);
BENCHMARK(cells<false>)->Name("cells/serial")->Arg(6)->Arg(12);
BENCHMARK(cells<true>)->Name("cells/parallel")->Arg(6)->Arg(12);
BENCHMARK(monte_carlo<false>)->Name("mc/serial")->Arg(100000);
BENCHMARK(monte_carlo<true>)->Name("mc/parallel")->Arg(100000);

BENCHMARK_MAIN();
