#pragma once

namespace sonoloc::dsp {

/// Kaiser window evaluated at x in [-1, 1]; zero outside.
double kaiser(double x, double beta);

/// Normalized sinc, sin(pi t) / (pi t).
double sinc(double t);

/// Kaiser-windowed sinc interpolation kernel with support |t| < half_width.
/// Used for fractional delays in the simulator and the beamformer.
double windowed_sinc(double t, double half_width, double beta);

/// Kaiser beta for a target stopband attenuation in dB.
double kaiser_beta(double attenuation_db);

}  // namespace sonoloc::dsp
