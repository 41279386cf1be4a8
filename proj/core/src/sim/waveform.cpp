#include "sonoloc/sim/waveform.hpp"

#include "sonoloc/dsp/fft.hpp"
#include "sonoloc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace sonoloc::sim {
namespace {

void check_band(double lo, double hi, double sample_rate, const char* what) {
    if (!(lo >= 0.0) || !(hi > lo) || !(hi < sample_rate / 2.0)) {
        throw InvalidArgument(std::string(what) + ": need 0 <= lo < hi < sample_rate / 2");
    }
}

// Zeroes every FFT bin outside [lo, hi].
void band_limit(std::vector<double>& x, double lo, double hi, double sample_rate) {
    dsp::RealFft fft(x.size());
    std::vector<std::complex<double>> spec(fft.bins());
    fft.forward(x, spec);
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double f = static_cast<double>(k) * sample_rate / n;
        if (f < lo || f > hi) spec[k] = 0.0;
    }
    fft.inverse(spec, x);
    for (double& v : x) v /= n;
}

std::size_t sample_count(double duration, double sample_rate) {
    return static_cast<std::size_t>(std::llround(duration * sample_rate));
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void validate_waveform(const WaveformKind& kind, double sample_rate) {
    if (!(sample_rate > 0.0)) throw InvalidArgument("waveform: sample rate must be positive");
    std::visit(
        [&](const auto& w) {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, ImpulseTrain>) {
                if (!(w.period > 0.0)) throw InvalidArgument("impulse train: period must be positive");
                if (!(w.decay > 0.0)) throw InvalidArgument("impulse train: decay must be positive");
                if (w.hi_hz > 0.0) check_band(w.lo_hz, w.hi_hz, sample_rate, "impulse train band");
            } else if constexpr (std::is_same_v<T, BandLimitedNoise>) {
                check_band(w.lo_hz, w.hi_hz, sample_rate, "band-limited noise");
            } else if constexpr (std::is_same_v<T, Tone>) {
                if (!(w.freq_hz > 0.0) || !(w.freq_hz < sample_rate / 2.0)) {
                    throw InvalidArgument("tone: frequency must lie in (0, sample_rate / 2)");
                }
            }
        },
        kind);
}

std::vector<double> impulse_onsets(const ImpulseTrain& train, double duration) {
    std::vector<double> onsets;
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * train.period;
        if (t >= duration - 1e-12) break;
        onsets.push_back(t);
    }
    return onsets;
}

std::vector<double> render_clicks(const ImpulseTrain& train, std::span<const double> onsets, double duration,
                                  double sample_rate, std::uint64_t seed) {
    validate_waveform(train, sample_rate);
    const std::size_t n = sample_count(duration, sample_rate);
    std::vector<double> out(n, 0.0);

    const double tau = train.decay * sample_rate;
    const auto body = static_cast<std::size_t>(std::ceil(8.0 * tau)) + 1;
    const bool banded = train.hi_hz > 0.0;
    // Band-limiting rings on both sides; keep a lead-in so the ringing before
    // the onset is not wrapped onto the tail.
    const std::size_t lead = banded ? std::max<std::size_t>(body / 4, 64) : 0;
    const std::size_t len = banded ? dsp::next_power_of_two(body + 2 * lead) : body;

    for (std::size_t k = 0; k < onsets.size(); ++k) {
        std::mt19937_64 rng(mix_seed(seed, k));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> click(len, 0.0);
        for (std::size_t i = 0; i < body; ++i) {
            click[lead + i] = std::exp(-static_cast<double>(i) / tau) * gauss(rng);
        }
        if (banded) band_limit(click, train.lo_hz, train.hi_hz, sample_rate);
        double peak = 0.0;
        for (double v : click) peak = std::max(peak, std::abs(v));
        if (peak > 0.0) {
            for (double& v : click) v /= peak;
        }

        const auto onset = static_cast<std::int64_t>(std::llround(onsets[k] * sample_rate));
        for (std::size_t i = 0; i < len; ++i) {
            const std::int64_t at = onset - static_cast<std::int64_t>(lead) + static_cast<std::int64_t>(i);
            if (at >= 0 && at < static_cast<std::int64_t>(n)) out[static_cast<std::size_t>(at)] += click[i];
        }
    }
    return out;
}

std::vector<double> synth_waveform(const WaveformKind& kind, double duration, double sample_rate, std::uint64_t seed) {
    if (!(duration > 0.0)) throw InvalidArgument("waveform: duration must be positive");
    validate_waveform(kind, sample_rate);
    const std::size_t n = sample_count(duration, sample_rate);

    return std::visit(
        [&](const auto& w) -> std::vector<double> {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, ImpulseTrain>) {
                const std::vector<double> onsets = impulse_onsets(w, duration);
                return render_clicks(w, onsets, duration, sample_rate, seed);
            } else if constexpr (std::is_same_v<T, BandLimitedNoise>) {
                std::mt19937_64 rng(seed);
                std::normal_distribution<double> gauss(0.0, 1.0);
                std::vector<double> x(n);
                for (double& v : x) v = gauss(rng);
                band_limit(x, w.lo_hz, w.hi_hz, sample_rate);
                double energy = 0.0;
                for (double v : x) energy += v * v;
                const double rms = std::sqrt(energy / static_cast<double>(n));
                if (rms > 0.0) {
                    for (double& v : x) v /= rms;
                }
                return x;
            } else if constexpr (std::is_same_v<T, Tone>) {
                std::vector<double> x(n);
                const double w0 = 2.0 * std::numbers::pi * w.freq_hz / sample_rate;
                for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(w0 * static_cast<double>(i));
                return x;
            } else {
                std::vector<double> x(n, 0.0);
                std::copy_n(w.samples.begin(), std::min(n, w.samples.size()), x.begin());
                return x;
            }
        },
        kind);
}

}  // namespace sonoloc::sim
