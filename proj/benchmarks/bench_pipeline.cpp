#include "metricstats/dispersion.hpp"
#include "metricstats/distance.hpp"
#include "metricstats/frechet.hpp"
#include "metricstats/geodesics.hpp"
#include "metricstats/intrinsic.hpp"
#include "metricstats/simulate.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace metricstats;

ObjectSample hemisphere_sample(int n) {
    ScenarioSpec spec;
    spec.design = ScenarioSpec::Design::Hemisphere;
    spec.n = n;
    spec.noise = 0.05;
    spec.seed = 7;
    return generate(spec);
}

void bench_distance_matrix(benchmark::State& state) {
    const ObjectSample sample = hemisphere_sample(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(distance_matrix(sample));
    }
}
BENCHMARK(bench_distance_matrix)->Arg(100)->Arg(400);

void bench_spd_distance_matrix(benchmark::State& state) {
    ScenarioSpec spec;
    spec.design = ScenarioSpec::Design::RandomSpd;
    spec.n = static_cast<int>(state.range(0));
    spec.seed = 7;
    ObjectSample sample = generate(spec);
    sample.space = SpaceKind::parse("spd:3:affine");
    for (auto _ : state) {
        benchmark::DoNotOptimize(distance_matrix(sample));
    }
}
BENCHMARK(bench_spd_distance_matrix)->Arg(100);

void bench_dijkstra_all_pairs(benchmark::State& state) {
    const ObjectSample sample = hemisphere_sample(static_cast<int>(state.range(0)));
    const DistanceMatrix dist = distance_matrix(sample);
    const ResolvedGraph resolved = resolve_neighbor_graph(dist, RadiusSpec::auto_radius(1.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dijkstra_all_pairs(resolved.graph));
    }
}
BENCHMARK(bench_dijkstra_all_pairs)->Arg(200)->Arg(500);

void bench_dispersion(benchmark::State& state) {
    const ObjectSample sample = hemisphere_sample(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dispersion(sample));
    }
}
BENCHMARK(bench_dispersion)->Arg(200)->Arg(500);

void bench_bures_mean(benchmark::State& state) {
    ScenarioSpec spec;
    spec.design = ScenarioSpec::Design::RotatedGaussians;
    spec.n = static_cast<int>(state.range(0));
    spec.seed = 7;
    const ObjectSample sample = generate(spec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(frechet_mean(sample));
    }
}
BENCHMARK(bench_bures_mean)->Arg(50);

void bench_isomap_embed(benchmark::State& state) {
    const ObjectSample sample = hemisphere_sample(static_cast<int>(state.range(0)));
    const DistanceMatrix dist = distance_matrix(sample);
    const ResolvedGraph resolved = resolve_neighbor_graph(dist, RadiusSpec::auto_radius(1.0));
    const DistanceMatrix d_i = dijkstra_all_pairs(resolved.graph);
    for (auto _ : state) {
        benchmark::DoNotOptimize(isomap_embed(sample, d_i, 2));
    }
}
BENCHMARK(bench_isomap_embed)->Arg(200);

} // namespace

BENCHMARK_MAIN();
