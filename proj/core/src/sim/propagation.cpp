#include "sonoloc/sim/propagation.hpp"

#include "sonoloc/dsp/kaiser.hpp"
#include "sonoloc/errors.hpp"

#include <array>
#include <cmath>
#include <random>

namespace sonoloc::sim {

double propagation_delay_samples(const Vec3& a, const Vec3& b, double speed_of_sound, double sample_rate) {
    return (a - b).norm() / speed_of_sound * sample_rate;
}

MultichannelRecording simulate_propagation(const SyntheticScene& scene, std::uint64_t seed) {
    scene.validate();
    const double fs = scene.array.sample_rate;
    const auto n = static_cast<std::int64_t>(std::llround(scene.duration * fs));
    const std::size_t n_mics = scene.array.size();

    std::vector<std::vector<double>> signals;
    signals.reserve(scene.sources.size());
    for (std::size_t s = 0; s < scene.sources.size(); ++s) {
        signals.push_back(render_source(scene.sources[s], scene.duration, fs, mix_seed(seed, s)));
    }

    constexpr int half = kPropagationTaps / 2;
    MultichannelRecording rec;
    rec.sample_rate = fs;
    rec.channels.resize(n_mics);

    std::vector<double> clean(static_cast<std::size_t>(n));
    for (std::size_t m = 0; m < n_mics; ++m) {
        std::fill(clean.begin(), clean.end(), 0.0);
        const Vec3 mic = scene.mic_world(m);
        for (std::size_t s = 0; s < scene.sources.size(); ++s) {
            const SourceSpec& src = scene.sources[s];
            const double r = (src.position - mic).norm();
            if (r < 1e-3) throw InvalidArgument("source coincides with microphone " + std::to_string(m));
            const double delay = r / scene.speed_of_sound * fs;
            const double gain = src.amplitude / std::max(r, kMinAttenuationRange);
            const auto whole = static_cast<std::int64_t>(std::floor(delay));
            const double frac = delay - static_cast<double>(whole);

            // y[j + whole + k] += h[k] x[j], h[k] = K(k - frac), k in [-half + 1, half].
            std::array<double, kPropagationTaps> taps{};
            for (int k = -half + 1; k <= half; ++k) {
                taps[static_cast<std::size_t>(k + half - 1)] =
                    gain * dsp::windowed_sinc(static_cast<double>(k) - frac, half, kPropagationBeta);
            }
            const std::vector<double>& x = signals[s];
            for (std::int64_t j = 0; j < n; ++j) {
                const double v = x[static_cast<std::size_t>(j)];
                if (v == 0.0) continue;
                const std::int64_t base = j + whole;
                const int k_lo = static_cast<int>(std::max<std::int64_t>(-half + 1, -base));
                const int k_hi = static_cast<int>(std::min<std::int64_t>(half, n - 1 - base));
                for (int k = k_lo; k <= k_hi; ++k) {
                    clean[static_cast<std::size_t>(base + k)] += taps[static_cast<std::size_t>(k + half - 1)] * v;
                }
            }
        }

        std::vector<float>& out = rec.channels[m];
        out.resize(static_cast<std::size_t>(n));
        double sigma = 0.0;
        if (scene.snr_db) {
            double energy = 0.0;
            for (double v : clean) energy += v * v;
            const double rms = n > 0 ? std::sqrt(energy / static_cast<double>(n)) : 0.0;
            sigma = rms * std::pow(10.0, -*scene.snr_db / 20.0);
        }
        if (sigma > 0.0) {
            std::mt19937_64 rng(mix_seed(seed ^ 0xA5A5A5A5ULL, 1000 + m));
            std::normal_distribution<double> gauss(0.0, sigma);
            for (std::int64_t i = 0; i < n; ++i) {
                out[static_cast<std::size_t>(i)] = static_cast<float>(clean[static_cast<std::size_t>(i)] + gauss(rng));
            }
        } else {
            for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = static_cast<float>(clean[static_cast<std::size_t>(i)]);
        }
    }
    return rec;
}

}  // namespace sonoloc::sim
