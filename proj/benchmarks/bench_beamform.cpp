#include "sonoloc/beamform/delay_and_sum.hpp"
#include "sonoloc/beamform/steering.hpp"
#include "sonoloc/sim/array.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace sonoloc;

namespace {

// One 40 ms frame over a square grid of state.range(0) cells per side, 48-mic ring at 192 kHz.
void BM_DelayAndSumFrame(benchmark::State& state) {
    const auto array = sim::make_ring_array(sim::kRingMics, sim::kRingRadius, sim::kArraySampleRate);
    beamform::ScanGrid grid;
    grid.nx = grid.ny = static_cast<std::size_t>(state.range(0));
    const auto steering = beamform::compute_steering(array, grid, 343.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<float> g;
    MultichannelRecording rec{std::vector<std::vector<float>>(array.size(), std::vector<float>(19200)), array.sample_rate};
    for (auto& ch : rec.channels)
        for (float& v : ch) v = g(rng);
    const auto window = beamform::video_frame_window(0.03);
    for (auto _ : state) benchmark::DoNotOptimize(beamform::delay_and_sum(rec, steering, window));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.cells()));
}
BENCHMARK(BM_DelayAndSumFrame)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Steering(benchmark::State& state) {
    const auto array = sim::make_ring_array(sim::kRingMics, sim::kRingRadius, sim::kArraySampleRate);
    beamform::ScanGrid grid;
    for (auto _ : state) benchmark::DoNotOptimize(beamform::compute_steering(array, grid, 343.0));
}
BENCHMARK(BM_Steering)->Unit(benchmark::kMillisecond);

}  // namespace
