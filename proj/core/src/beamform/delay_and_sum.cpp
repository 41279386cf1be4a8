#include "sonoloc/beamform/delay_and_sum.hpp"

#include "sonoloc/dsp/kaiser.hpp"
#include "sonoloc/errors.hpp"
#include "sonoloc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace sonoloc::beamform {

namespace {

constexpr std::size_t kChunk = 512;

// The accumulation pass dominates the cost; AVX2 clones roughly halve it on
// hardware that has them.
__attribute__((target_clones("avx2", "default")))
void accumulate(float* __restrict dst, const float* __restrict src, float w, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += w * src[i];
}

__attribute__((target_clones("avx2", "default")))
double sum_squares(const float* __restrict x, std::size_t n) {
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += static_cast<double>(x[i]) * static_cast<double>(x[i]);
    return e;
}

}  // namespace

void DelayAndSumOptions::validate() const {
    if (interp_taps < 2 || interp_taps % 2 != 0) throw InvalidArgument("delay_and_sum: interp_taps must be even and >= 2");
    if (delay_resolution < 1) throw InvalidArgument("delay_and_sum: delay_resolution must be >= 1");
    if (!(kaiser_beta >= 0.0)) throw InvalidArgument("delay_and_sum: kaiser_beta must be >= 0");
}

TimeWindow video_frame_window(double start) { return {start, start + 1.0 / kVideoFrameRate}; }

AcousticHeatmap delay_and_sum(const MultichannelRecording& recording, const SteeringTable& steering,
                              const TimeWindow& window, const DelayAndSumOptions& options,
                              std::size_t jobs) {
    options.validate();
    const std::size_t n_mics = steering.mics();
    if (recording.sample_rate != steering.array.sample_rate) {
        throw RateMismatch("delay_and_sum: recording rate " + std::to_string(recording.sample_rate) +
                           " Hz differs from array rate " + std::to_string(steering.array.sample_rate) + " Hz");
    }
    if (recording.channel_count() != n_mics) {
        throw RateMismatch("delay_and_sum: recording has " + std::to_string(recording.channel_count()) +
                           " channels, array has " + std::to_string(n_mics));
    }
    const double fs = recording.sample_rate;
    const auto first = static_cast<std::int64_t>(std::llround(window.start * fs));
    const auto last = static_cast<std::int64_t>(std::llround(window.end * fs));
    const auto length = static_cast<std::int64_t>(recording.length());
    if (!(window.start >= 0.0) || last <= first || last > length) {
        throw OutOfRangeWindow("delay_and_sum: window [" + std::to_string(window.start) + ", " +
                               std::to_string(window.end) + ") s outside recording of " +
                               std::to_string(recording.duration()) + " s");
    }
    const std::size_t n = static_cast<std::size_t>(last - first);
    const std::size_t cells = steering.grid.cells();
    const int q_res = options.delay_resolution;
    const int half = options.interp_taps / 2;

    // Quantize every steering delay into whole samples plus a phase index.
    std::vector<std::int32_t> whole(cells * n_mics);
    std::vector<std::int32_t> phase(cells * n_mics);
    std::vector<std::vector<bool>> used(n_mics, std::vector<bool>(static_cast<std::size_t>(q_res), false));
    std::int64_t max_whole = 0;
    for (std::size_t c = 0; c < cells; ++c) {
        for (std::size_t m = 0; m < n_mics; ++m) {
            const auto steps = static_cast<std::int64_t>(std::llround(steering.delay(c, m) * q_res));
            const std::int64_t w = steps / q_res;
            const std::int64_t q = steps % q_res;
            whole[c * n_mics + m] = static_cast<std::int32_t>(w);
            phase[c * n_mics + m] = static_cast<std::int32_t>(q);
            used[m][static_cast<std::size_t>(q)] = true;
            max_whole = std::max(max_whole, w);
        }
    }

    // shifted[m][q][i] = channel m evaluated at time first + i + q / q_res,
    // interpolated in double and stored as float for the accumulation pass.
    const std::size_t span = n + static_cast<std::size_t>(max_whole);
    std::vector<std::vector<std::vector<float>>> shifted(
        n_mics, std::vector<std::vector<float>>(static_cast<std::size_t>(q_res)));
    std::vector<double> kernel(static_cast<std::size_t>(options.interp_taps));
    for (std::size_t m = 0; m < n_mics; ++m) {
        const std::vector<float>& x = recording.channels[m];
        for (int q = 0; q < q_res; ++q) {
            if (!used[m][static_cast<std::size_t>(q)]) continue;
            const double frac = static_cast<double>(q) / q_res;
            // Taps k in [-half + 1, half] weight sample first + i + k by K(frac - k).
            for (int k = -half + 1; k <= half; ++k) {
                kernel[static_cast<std::size_t>(k + half - 1)] =
                    dsp::windowed_sinc(frac - static_cast<double>(k), half, options.kaiser_beta);
            }
            std::vector<float>& out = shifted[m][static_cast<std::size_t>(q)];
            out.assign(span, 0.0f);
            for (std::size_t i = 0; i < span; ++i) {
                const std::int64_t centre = first + static_cast<std::int64_t>(i);
                double acc = 0.0;
                if (centre - half + 1 >= 0 && centre + half < length) {
                    const float* src = x.data() + centre;
                    for (int k = -half + 1; k <= half; ++k) {
                        acc += kernel[static_cast<std::size_t>(k + half - 1)] * static_cast<double>(src[k]);
                    }
                } else {
                    for (int k = -half + 1; k <= half; ++k) {
                        const std::int64_t j = centre + k;
                        if (j < 0 || j >= length) continue;
                        acc += kernel[static_cast<std::size_t>(k + half - 1)] * static_cast<double>(x[static_cast<std::size_t>(j)]);
                    }
                }
                out[i] = static_cast<float>(acc);
            }
        }
    }
    std::vector<float> weights(steering.weights.begin(), steering.weights.end());

    AcousticHeatmap heatmap;
    heatmap.grid = steering.grid;
    heatmap.values.assign(cells, 0.0);
    heatmap.time_window = window;
    heatmap.video_frame = video_frame_at(window.start);

    // Cells are split into blocks for the worker pool; inside a block the
    // window is walked in chunks so the buffer slices all cells read stay in
    // cache. Each cell's result depends only on its own sums, so the block
    // layout never changes the output.
    const std::size_t blocks = std::min<std::size_t>(cells, std::max<std::size_t>(1, jobs) * 8);
    const std::size_t per_block = (cells + blocks - 1) / blocks;
    parallel_for(blocks, jobs, [&](std::size_t b) {
        const std::size_t c0 = b * per_block;
        const std::size_t c1 = std::min(cells, c0 + per_block);
        if (c0 >= c1) return;
        std::vector<double> energy(c1 - c0, 0.0);
        std::vector<float> acc(kChunk);
        for (std::size_t t0 = 0; t0 < n; t0 += kChunk) {
            const std::size_t len = std::min(kChunk, n - t0);
            for (std::size_t c = c0; c < c1; ++c) {
                std::fill(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(len), 0.0f);
                for (std::size_t m = 0; m < n_mics; ++m) {
                    const std::size_t slot = c * n_mics + m;
                    const float* src = shifted[m][static_cast<std::size_t>(phase[slot])].data() + whole[slot] + t0;
                    accumulate(acc.data(), src, weights[slot], len);
                }
                energy[c - c0] += sum_squares(acc.data(), len);
            }
        }
        for (std::size_t c = c0; c < c1; ++c) {
            heatmap.values[c] = std::sqrt(energy[c - c0] / static_cast<double>(n));
        }
    });
    return heatmap;
}

}  // namespace sonoloc::beamform
