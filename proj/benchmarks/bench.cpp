#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "vallearn/distributions.hpp"
#include "vallearn/instances.hpp"
#include "vallearn/learners.hpp"
#include "vallearn/rng.hpp"
#include "vallearn/valuation.hpp"

using namespace vallearn;

namespace {

ItemSet random_half(std::uint32_t n, Rng& rng) {
    ItemSet s(n);
    for (std::uint32_t i = 0; i < n; ++i)
        if (rng.coin()) s.insert(i);
    return s;
}

std::vector<Sample> draw_samples(const Valuation& target, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    Distribution dist = Distribution::uniform_subsets(target.ground_size());
    std::vector<Sample> samples;
    samples.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        ItemSet s = dist.sample(rng);
        samples.push_back({s, target.eval(s)});
    }
    return samples;
}

// Max-weight-matching evaluation of a SUM-of-MAX valuation, by ground size.
void BM_OxsEval(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    GenParams params;
    params.trees = 8;
    Valuation v = gen_random("oxs", n, params, 1);
    Rng rng(2);
    ItemSet s = random_half(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(v.eval(s));
    state.SetComplexityN(n);
}
BENCHMARK(BM_OxsEval)->Arg(16)->Arg(64)->Arg(256)->Complexity();

// MAX-of-SUM evaluation: one additive pass per tree.
void BM_XosEval(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    GenParams params;
    params.trees = 32;
    Valuation v = gen_random("xos", n, params, 1);
    Rng rng(2);
    ItemSet s = random_half(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(v.eval(s));
    state.SetComplexityN(n);
}
BENCHMARK(BM_XosEval)->Arg(16)->Arg(64)->Arg(256)->Complexity();

// Full learn pipeline on MAX-of-SUM targets: separator LP dominates, and the
// largest size crosses the threshold where cut generation kicks in.
void BM_LearnXos(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    GenParams params;
    params.trees = 10;
    Valuation target = gen_random("xos", 16, params, 3);
    std::vector<Sample> samples = draw_samples(target, m, 4);
    std::uint64_t run = 0;
    for (auto _ : state) {
        Rng coins(run++);
        benchmark::DoNotOptimize(pmac_xos(samples, 16, 0.5, coins));
    }
}
BENCHMARK(BM_LearnXos)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

// Learn with feature expansion: every subset of up to L indices becomes one
// coordinate, so cost grows steeply with the expansion order.
void BM_LearnFeatureExpansion(benchmark::State& state) {
    const double eta = 1.0 / static_cast<double>(state.range(0));
    GenParams params;
    params.trees = 4;
    Valuation target = gen_random("xos", 10, params, 5);
    std::vector<Sample> samples = draw_samples(target, 512, 6);
    std::uint64_t run = 0;
    for (auto _ : state) {
        Rng coins(run++);
        benchmark::DoNotOptimize(pmac_xos_r_trees(samples, 10, 4.0, eta, 0.5, coins));
    }
}
BENCHMARK(BM_LearnFeatureExpansion)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

// Rejection-sampled family of near-disjoint sets used by the hard instances.
void BM_IntersectionFamily(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(gen_intersection_family(n, n / 64, seed++));
}
BENCHMARK(BM_IntersectionFamily)->Arg(1024)->Arg(4096)->Arg(16384);

}  // namespace

BENCHMARK_MAIN();
