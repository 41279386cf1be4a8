#include "sonoloc/detect/features.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace sonoloc;

namespace {

// Log-mel features for a 10 s mono clip at 16 kHz.
void BM_ExtractFeatures(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> audio(160000);
    for (double& v : audio) v = g(rng);
    const dsp::SpectrogramConfig spec;
    for (auto _ : state) benchmark::DoNotOptimize(detect::extract_features(audio, spec));
}
BENCHMARK(BM_ExtractFeatures)->Unit(benchmark::kMillisecond);

}  // namespace
