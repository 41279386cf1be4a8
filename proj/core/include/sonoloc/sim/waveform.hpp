#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace sonoloc::sim {

/// Exponentially decaying noise clicks repeating every `period` seconds.
/// When hi_hz > 0 each click is band-limited to [lo_hz, hi_hz].
struct ImpulseTrain {
    double period = 0.5;
    double decay = 0.004;
    double lo_hz = 0.0;
    double hi_hz = 0.0;
};

/// Gaussian noise with all spectral energy inside [lo_hz, hi_hz], unit RMS.
struct BandLimitedNoise {
    double lo_hz = 1000.0;
    double hi_hz = 5000.0;
};

struct Tone {
    double freq_hz = 1000.0;
};

/// Caller-provided samples at the scene rate, zero-padded or truncated to the clip.
struct CustomWaveform {
    std::vector<double> samples;
};

using WaveformKind = std::variant<ImpulseTrain, BandLimitedNoise, Tone, CustomWaveform>;

void validate_waveform(const WaveformKind& kind, double sample_rate);

/// Renders `duration` seconds of the waveform; deterministic in `seed`.
std::vector<double> synth_waveform(const WaveformKind& kind, double duration, double sample_rate, std::uint64_t seed);

/// Clicks of an impulse train placed at explicit onset times instead of the period grid.
std::vector<double> render_clicks(const ImpulseTrain& train, std::span<const double> onsets, double duration,
                                  double sample_rate, std::uint64_t seed);

/// Onset times k * period inside [0, duration).
std::vector<double> impulse_onsets(const ImpulseTrain& train, double duration);

/// SplitMix64 step; used to derive independent per-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sonoloc::sim
