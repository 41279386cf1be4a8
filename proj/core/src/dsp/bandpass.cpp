#include "sonoloc/dsp/bandpass.hpp"

#include "sonoloc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace sonoloc::dsp {

using cplx = std::complex<double>;

void BandpassSpec::validate(double sample_rate) const {
    if (!(sample_rate > 0.0)) throw InvalidArgument("bandpass: sample rate must be positive");
    if (!(lo > 0.0) || !(hi > lo) || !(hi < sample_rate / 2.0)) {
        throw InvalidArgument("bandpass: need 0 < lo < hi < sample_rate / 2");
    }
    if (order < 2 || order % 2 != 0) throw InvalidArgument("bandpass: order must be even and >= 2");
}

std::vector<Biquad> design_bandpass(const BandpassSpec& spec, double sample_rate) {
    spec.validate(sample_rate);
    const double fs2 = 2.0 * sample_rate;
    const double w_lo = fs2 * std::tan(std::numbers::pi * spec.lo / sample_rate);
    const double w_hi = fs2 * std::tan(std::numbers::pi * spec.hi / sample_rate);
    const double bw = w_hi - w_lo;
    const double w0_sq = w_lo * w_hi;

    // Lowpass prototype poles in the upper half plane; conjugates follow.
    std::vector<cplx> analog;
    const int n = spec.order;
    for (int k = 0; k < n; ++k) {
        const double theta = std::numbers::pi * (2.0 * k + n + 1) / (2.0 * n);
        const cplx p = std::polar(1.0, theta);
        // s^2 - p*bw*s + w0^2 = 0 for each prototype pole.
        const cplx disc = std::sqrt(p * p * bw * bw - 4.0 * w0_sq);
        analog.push_back((p * bw + disc) / 2.0);
        analog.push_back((p * bw - disc) / 2.0);
    }

    std::vector<cplx> digital;
    for (const cplx& s : analog) {
        const cplx z = (fs2 + s) / (fs2 - s);
        if (z.imag() > 0.0) digital.push_back(z);
    }
    std::sort(digital.begin(), digital.end(), [](const cplx& a, const cplx& b) { return std::arg(a) < std::arg(b); });
    if (digital.size() != static_cast<std::size_t>(n)) {
        throw InvalidArgument("bandpass: degenerate pole layout for this band");
    }

    // One zero at z = 1 and one at z = -1 per section.
    std::vector<Biquad> sections;
    for (const cplx& z : digital) {
        Biquad s;
        s.b0 = 1.0;
        s.b1 = 0.0;
        s.b2 = -1.0;
        s.a1 = -2.0 * z.real();
        s.a2 = std::norm(z);
        sections.push_back(s);
    }

    const double center_hz = sample_rate / std::numbers::pi * std::atan(std::sqrt(w0_sq) / fs2);
    const double gain = cascade_gain(sections, center_hz, sample_rate);
    const double per_section = std::pow(1.0 / gain, 1.0 / static_cast<double>(sections.size()));
    for (Biquad& s : sections) {
        s.b0 *= per_section;
        s.b1 *= per_section;
        s.b2 *= per_section;
    }
    return sections;
}

void filter_sections(std::span<const Biquad> sections, std::span<double> signal) {
    for (const Biquad& s : sections) {
        double z1 = 0.0;
        double z2 = 0.0;
        for (double& x : signal) {
            const double y = s.b0 * x + z1;
            z1 = s.b1 * x - s.a1 * y + z2;
            z2 = s.b2 * x - s.a2 * y;
            x = y;
        }
    }
}

double cascade_gain(std::span<const Biquad> sections, double freq_hz, double sample_rate) {
    const cplx z1 = std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / sample_rate);
    const cplx z2 = z1 * z1;
    cplx h = 1.0;
    for (const Biquad& s : sections) {
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    }
    return std::abs(h);
}

std::vector<double> bandpass(std::span<const double> signal, const BandpassSpec& spec, double sample_rate) {
    const std::vector<Biquad> sections = design_bandpass(spec, sample_rate);
    const std::size_t n = signal.size();
    if (n == 0) return {};

    // Edge extension long enough for the lowest band edge to settle.
    const auto settle = static_cast<std::size_t>(std::ceil(6.0 * sample_rate / spec.lo));
    const std::size_t pad = std::min(n - 1, settle);

    std::vector<double> ext(n + 2 * pad);
    const double first = signal.front();
    const double last = signal.back();
    for (std::size_t i = 0; i < pad; ++i) {
        ext[pad - 1 - i] = 2.0 * first - signal[i + 1];
        ext[pad + n + i] = 2.0 * last - signal[n - 2 - i];
    }
    std::copy(signal.begin(), signal.end(), ext.begin() + static_cast<std::ptrdiff_t>(pad));

    filter_sections(sections, ext);
    std::reverse(ext.begin(), ext.end());
    filter_sections(sections, ext);
    std::reverse(ext.begin(), ext.end());

    return {ext.begin() + static_cast<std::ptrdiff_t>(pad), ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace sonoloc::dsp
