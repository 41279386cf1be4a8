#include "sonoloc/dsp/resample.hpp"

#include "sonoloc/dsp/kaiser.hpp"
#include "sonoloc/errors.hpp"

#include <cmath>
#include <cstdint>
#include <numeric>

namespace sonoloc::dsp {
namespace {

constexpr double kStopbandDb = 70.0;
constexpr double kCutoffFraction = 0.475;     // of the lower rate
constexpr double kTransitionFraction = 0.05;  // of the lower rate

struct Kernel {
    double cutoff_hz;
    double half_length_s;
    double beta;

    // Continuous-time lowpass impulse response with unit DC gain.
    double operator()(double tau) const {
        if (std::abs(tau) >= half_length_s) return 0.0;
        return 2.0 * cutoff_hz * sinc(2.0 * cutoff_hz * tau) * kaiser(tau / half_length_s, beta);
    }
};

bool integral(double r) { return std::abs(r - std::round(r)) < 1e-9 && r < 9.0e15; }

}  // namespace

std::vector<double> resample(std::span<const double> signal, double from, double to) {
    if (!(from > 0.0) || !(to > 0.0) || !std::isfinite(from) || !std::isfinite(to)) {
        throw InvalidArgument("resample: sample rates must be positive");
    }
    if (from == to) return {signal.begin(), signal.end()};

    const double low = std::min(from, to);
    const double transition = kTransitionFraction * low;
    const Kernel kernel{kCutoffFraction * low, (kStopbandDb - 7.95) / (28.72 * transition), kaiser_beta(kStopbandDb)};

    const auto n_in = static_cast<std::int64_t>(signal.size());
    const auto n_out = static_cast<std::int64_t>(std::llround(static_cast<double>(signal.size()) * to / from));
    std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(n_out, 0)), 0.0);

    // Taps reach K input samples on each side of the output instant.
    const auto reach = static_cast<std::int64_t>(std::ceil(kernel.half_length_s * from)) + 1;

    auto accumulate = [&](std::int64_t base, std::int64_t first_tap, auto&& coeff) {
        double acc = 0.0;
        for (std::int64_t q = first_tap; q <= reach; ++q) {
            const std::int64_t j = base + q;
            if (j < 0) continue;
            if (j >= n_in) break;
            acc += coeff(q) * signal[static_cast<std::size_t>(j)];
        }
        return acc;
    };

    if (integral(from) && integral(to)) {
        const auto f = static_cast<std::int64_t>(std::llround(from));
        const auto t = static_cast<std::int64_t>(std::llround(to));
        const std::int64_t g = std::gcd(f, t);
        const std::int64_t up = t / g;    // L
        const std::int64_t down = f / g;  // M
        if (up <= 1024) {
            // Output i sits at input position (i * M) / L = base + phase / L.
            const std::int64_t taps = 2 * reach + 1;
            std::vector<double> table(static_cast<std::size_t>(up * taps));
            for (std::int64_t p = 0; p < up; ++p) {
                for (std::int64_t q = -reach; q <= reach; ++q) {
                    const double tau = (static_cast<double>(p) / static_cast<double>(up) - static_cast<double>(q)) / from;
                    table[static_cast<std::size_t>(p * taps + q + reach)] = kernel(tau) / from;
                }
            }
            for (std::int64_t i = 0; i < n_out; ++i) {
                const std::int64_t pos = i * down;
                const std::int64_t base = pos / up;
                const std::int64_t phase = pos % up;
                const double* row = &table[static_cast<std::size_t>(phase * taps + reach)];
                out[static_cast<std::size_t>(i)] =
                    accumulate(base, -reach, [row](std::int64_t q) { return row[q]; });
            }
            return out;
        }
    }

    for (std::int64_t i = 0; i < n_out; ++i) {
        const double pos = static_cast<double>(i) * from / to;
        const auto base = static_cast<std::int64_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(base);
        out[static_cast<std::size_t>(i)] = accumulate(base, -reach, [&](std::int64_t q) {
            return kernel((frac - static_cast<double>(q)) / from) / from;
        });
    }
    return out;
}

}  // namespace sonoloc::dsp
