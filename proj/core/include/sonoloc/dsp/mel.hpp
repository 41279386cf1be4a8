#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sonoloc::dsp {

/// Sliding-window log-mel analysis settings. Defaults: 16 kHz input, 150 ms
/// windows every 20 ms, 128 mel bins over [0, 8000] Hz.
struct SpectrogramConfig {
    double sample_rate = 16000.0;
    double window_len = 0.150;
    double hop_len = 0.020;
    std::size_t n_fft = 0;  // 0 selects the next power of two >= window samples
    std::size_t n_mels = 128;
    double mel_fmin = 0.0;
    double mel_fmax = 8000.0;

    void validate() const;
    std::size_t window_samples() const;
    std::size_t hop_samples() const;
    std::size_t fft_size() const;
    /// floor((len - window) / hop) + 1, or 0 when the signal is too short.
    std::size_t frame_count(std::size_t signal_len) const;
};

/// Frames x mel-bins of natural-log energies, row-major.
struct MelSpectrogram {
    std::size_t n_frames = 0;
    std::size_t n_mels = 0;
    std::vector<double> values;
    double hop_len = 0.0;
    double origin_time = 0.0;  // start of the first window, seconds

    std::span<const double> frame(std::size_t i) const { return {values.data() + i * n_mels, n_mels}; }
    double at(std::size_t frame_index, std::size_t mel) const { return values[frame_index * n_mels + mel]; }
};

inline constexpr double kLogFloor = 1e-10;

double hz_to_mel(double hz);   // HTK: 2595 log10(1 + f / 700)
double mel_to_hz(double mel);

/// Triangular HTK filterbank, n_mels rows by n_fft/2+1 columns, row-major.
std::vector<double> mel_filterbank(const SpectrogramConfig& config);

/// Center frequency of each mel filter in Hz.
std::vector<double> mel_center_frequencies(const SpectrogramConfig& config);

/// Hann-windowed power spectrum per window, mel-projected, ln(max(e, 1e-10)).
/// Throws TooShortInput when the signal is shorter than one window.
MelSpectrogram log_mel(std::span<const double> signal, const SpectrogramConfig& config);

}  // namespace sonoloc::dsp
