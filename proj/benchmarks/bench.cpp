#include <benchmark/benchmark.h>

#include <contagion/analytic.hpp>
#include <contagion/diffusion.hpp>
#include <contagion/graph.hpp>

using namespace contagion;

namespace {

Multigraph poisson_graph(std::size_t n, double lambda, std::uint64_t seed) {
    RandomStream rng(seed);
    const auto d = sample_degree_sequence(DegreeDistribution::poisson(lambda), n, rng);
    return configuration_model(d, rng);
}

void BM_ConfigurationModel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RandomStream rng(1);
    const auto d = sample_degree_sequence(DegreeDistribution::poisson(5.0), n, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(configuration_model(d, rng));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.total() / 2));
}
BENCHMARK(BM_ConfigurationModel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_BondPercolation(benchmark::State& state) {
    const auto g = poisson_graph(100000, 5.0, 2);
    RandomStream rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bond_percolate(g, 0.7, rng));
    }
}
BENCHMARK(BM_BondPercolation)->Unit(benchmark::kMillisecond);

void BM_PivotalCascade(benchmark::State& state) {
    const auto g = poisson_graph(static_cast<std::size_t>(state.range(0)), 5.0, 4);
    const auto k = proportional_thresholds(g, 0.15);
    RandomStream rng(5);
    const auto seeds = resolve_seed(g, g, ActivationLaw::pivotal_pair(), k, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_monotone_on(g, g, seeds, k));
    }
}
BENCHMARK(BM_PivotalCascade)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_PropagatorReuse(benchmark::State& state) {
    const auto g = poisson_graph(100000, 5.0, 6);
    const auto k = proportional_thresholds(g, 0.3);
    RandomStream rng(7);
    std::vector<Vertex> seeds;
    for (int i = 0; i < 2000; ++i) seeds.push_back(static_cast<Vertex>(rng.below(g.vertex_count())));
    Propagator prop;
    std::vector<std::uint8_t> active;
    for (auto _ : state) {
        benchmark::DoNotOptimize(prop.run(g, k.k, seeds, active));
    }
}
BENCHMARK(BM_PropagatorReuse)->Unit(benchmark::kMillisecond);

void BM_SolveZhat(benchmark::State& state) {
    const ModelParams mp{DegreeDistribution::poisson(static_cast<double>(state.range(0))),
                         ThresholdLaw::proportional(0.2), ActivationLaw::uniform(0.01), 0.8};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_zhat(mp));
    }
}
BENCHMARK(BM_SolveZhat)->Arg(5)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_CascadeWindow(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(poisson_cascade_window(0.15));
    }
}
BENCHMARK(BM_CascadeWindow)->Unit(benchmark::kMicrosecond);

void BM_AlphaC(benchmark::State& state) {
    const auto p = DegreeDistribution::poisson(3.0);
    const auto t = ThresholdLaw::proportional(0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(alpha_c(p, t, 1.0));
    }
}
BENCHMARK(BM_AlphaC)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
