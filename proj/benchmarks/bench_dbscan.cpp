#include "sonoloc/localize/dbscan.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace sonoloc;

namespace {

// Clustered cloud resembling a fused frame: dense blobs plus uniform clutter.
void BM_WeightedDbscan(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.5, 0.5), w(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 0.03);
    std::vector<Vec3> points;
    std::vector<double> weights;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 3 == 0) {
            points.emplace_back(u(rng), u(rng), 1.0 + u(rng));
        } else {
            const double cx = (i % 2) ? 0.2 : -0.2;
            points.emplace_back(cx + g(rng), g(rng), 1.0 + g(rng));
        }
        weights.push_back(w(rng));
    }
    const localize::ClusterParams params{0.03, 200.0};
    for (auto _ : state) benchmark::DoNotOptimize(localize::weighted_dbscan(points, weights, params));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_WeightedDbscan)->Arg(2000)->Arg(20000)->Arg(80000)->Unit(benchmark::kMillisecond);

}  // namespace
