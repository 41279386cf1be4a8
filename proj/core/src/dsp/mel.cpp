#include "sonoloc/dsp/mel.hpp"

#include "sonoloc/dsp/fft.hpp"
#include "sonoloc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace sonoloc::dsp {

void SpectrogramConfig::validate() const {
    if (!(sample_rate > 0.0)) throw InvalidArgument("spectrogram: sample_rate must be positive");
    if (!(window_len > 0.0) || !(hop_len > 0.0) || hop_len > window_len) {
        throw InvalidArgument("spectrogram: need 0 < hop_len <= window_len");
    }
    if (n_mels < 1) throw InvalidArgument("spectrogram: n_mels must be >= 1");
    if (n_fft != 0 && n_fft < window_samples()) throw InvalidArgument("spectrogram: n_fft shorter than window");
    if (!(mel_fmin >= 0.0) || !(mel_fmax > mel_fmin) || mel_fmax > sample_rate / 2.0 + 1e-9) {
        throw InvalidArgument("spectrogram: need 0 <= mel_fmin < mel_fmax <= Nyquist");
    }
}

std::size_t SpectrogramConfig::window_samples() const {
    return static_cast<std::size_t>(std::llround(window_len * sample_rate));
}

std::size_t SpectrogramConfig::hop_samples() const {
    return static_cast<std::size_t>(std::llround(hop_len * sample_rate));
}

std::size_t SpectrogramConfig::fft_size() const { return n_fft != 0 ? n_fft : next_power_of_two(window_samples()); }

std::size_t SpectrogramConfig::frame_count(std::size_t signal_len) const {
    const std::size_t w = window_samples();
    if (signal_len < w) return 0;
    return (signal_len - w) / hop_samples() + 1;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> mel_center_frequencies(const SpectrogramConfig& config) {
    const double lo = hz_to_mel(config.mel_fmin);
    const double hi = hz_to_mel(config.mel_fmax);
    const double step = (hi - lo) / static_cast<double>(config.n_mels + 1);
    std::vector<double> centers(config.n_mels);
    for (std::size_t m = 0; m < config.n_mels; ++m) {
        centers[m] = mel_to_hz(lo + step * static_cast<double>(m + 1));
    }
    return centers;
}

std::vector<double> mel_filterbank(const SpectrogramConfig& config) {
    config.validate();
    const std::size_t n_fft = config.fft_size();
    const std::size_t bins = n_fft / 2 + 1;
    const double lo = hz_to_mel(config.mel_fmin);
    const double hi = hz_to_mel(config.mel_fmax);
    const double step = (hi - lo) / static_cast<double>(config.n_mels + 1);

    std::vector<double> edges(config.n_mels + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = mel_to_hz(lo + step * static_cast<double>(i));

    std::vector<double> bank(config.n_mels * bins, 0.0);
    for (std::size_t m = 0; m < config.n_mels; ++m) {
        const double left = edges[m];
        const double center = edges[m + 1];
        const double right = edges[m + 2];
        for (std::size_t k = 0; k < bins; ++k) {
            const double f = static_cast<double>(k) * config.sample_rate / static_cast<double>(n_fft);
            double w = 0.0;
            if (f > left && f <= center) {
                w = (f - left) / (center - left);
            } else if (f > center && f < right) {
                w = (right - f) / (right - center);
            }
            bank[m * bins + k] = w;
        }
    }
    return bank;
}

MelSpectrogram log_mel(std::span<const double> signal, const SpectrogramConfig& config) {
    config.validate();
    const std::size_t win = config.window_samples();
    if (signal.size() < win) {
        throw TooShortInput("log_mel: signal of " + std::to_string(signal.size()) + " samples is shorter than one " +
                            std::to_string(win) + "-sample window");
    }
    const std::size_t hop = config.hop_samples();
    const std::size_t n_fft = config.fft_size();
    const std::size_t bins = n_fft / 2 + 1;
    const std::vector<double> bank = mel_filterbank(config);

    // Periodic Hann window.
    std::vector<double> hann(win);
    for (std::size_t i = 0; i < win; ++i) {
        hann[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(win));
    }

    MelSpectrogram out;
    out.n_frames = config.frame_count(signal.size());
    out.n_mels = config.n_mels;
    out.hop_len = config.hop_len;
    out.values.assign(out.n_frames * out.n_mels, 0.0);

    RealFft fft(n_fft);
    std::vector<double> frame(n_fft, 0.0);
    std::vector<std::complex<double>> spectrum(bins);
    std::vector<double> power(bins);
    for (std::size_t f = 0; f < out.n_frames; ++f) {
        const std::size_t start = f * hop;
        for (std::size_t i = 0; i < win; ++i) frame[i] = signal[start + i] * hann[i];
        fft.forward(frame, spectrum);
        for (std::size_t k = 0; k < bins; ++k) power[k] = std::norm(spectrum[k]);
        for (std::size_t m = 0; m < config.n_mels; ++m) {
            const double* row = &bank[m * bins];
            double e = 0.0;
            for (std::size_t k = 0; k < bins; ++k) e += row[k] * power[k];
            out.values[f * out.n_mels + m] = std::log(std::max(e, kLogFloor));
        }
    }
    return out;
}

}  // namespace sonoloc::dsp
