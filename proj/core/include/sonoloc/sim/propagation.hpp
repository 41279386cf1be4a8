#pragma once

#include "sonoloc/recording.hpp"
#include "sonoloc/sim/scene.hpp"

#include <cstdint>

namespace sonoloc::sim {

/// Taps of the fractional-delay interpolator used by the simulator.
inline constexpr int kPropagationTaps = 64;
inline constexpr double kPropagationBeta = 8.0;
/// Attenuation is 1 / max(r, kMinAttenuationRange).
inline constexpr double kMinAttenuationRange = 0.1;

/// Free-field forward model. Each channel is the sum over sources of
/// amplitude * signal(t - r / c) / max(r, 0.1 m), with fractional delays
/// realized by a 64-tap Kaiser-windowed sinc, plus white Gaussian noise at
/// the scene SNR relative to that channel's clean RMS.
///
/// Throws InvalidArgument if a source lies within 1 mm of a microphone.
MultichannelRecording simulate_propagation(const SyntheticScene& scene, std::uint64_t seed);

/// Propagation delay in samples between two points.
double propagation_delay_samples(const Vec3& a, const Vec3& b, double speed_of_sound, double sample_rate);

}  // namespace sonoloc::sim
