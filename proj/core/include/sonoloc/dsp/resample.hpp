#pragma once

#include <span>
#include <vector>

namespace sonoloc::dsp {

/// Sample-rate conversion with a Kaiser-windowed sinc anti-alias filter.
///
/// The filter passes everything below 0.45 * min(from, to) and attenuates
/// everything above 0.5 * min(from, to) by at least 60 dB. Integer rate pairs
/// use precomputed polyphase tables; other pairs evaluate the kernel per tap.
/// Output length is round(input.size() * to / from). Samples outside the
/// input are treated as zero.
std::vector<double> resample(std::span<const double> signal, double from, double to);

}  // namespace sonoloc::dsp
