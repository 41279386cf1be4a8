#pragma once

#include <span>
#include <vector>

namespace sonoloc::dsp {

/// Butterworth band-pass specification. `order` is the order of the lowpass
/// prototype; the resulting band-pass has 2 * order poles.
struct BandpassSpec {
    double lo = 1000.0;
    double hi = 5000.0;
    int order = 4;

    void validate(double sample_rate) const;
};

/// Direct-form-II-transposed second-order section, a0 normalized to 1.
struct Biquad {
    double b0 = 1, b1 = 0, b2 = 0;
    double a1 = 0, a2 = 0;
};

/// Bilinear-transform design with pre-warped band edges, unit gain at the
/// geometric band center.
std::vector<Biquad> design_bandpass(const BandpassSpec& spec, double sample_rate);

/// Single causal pass through a cascade, zero initial state.
void filter_sections(std::span<const Biquad> sections, std::span<double> signal);

/// Magnitude response of a cascade at `freq_hz`.
double cascade_gain(std::span<const Biquad> sections, double freq_hz, double sample_rate);

/// Zero-phase band-pass: forward-backward application of the cascade with
/// odd-symmetric edge extension.
std::vector<double> bandpass(std::span<const double> signal, const BandpassSpec& spec, double sample_rate);

}  // namespace sonoloc::dsp
