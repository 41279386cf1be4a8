#include "sonoloc/dsp/kaiser.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sonoloc::dsp {

double kaiser(double x, double beta) {
    if (x < -1.0 || x > 1.0) return 0.0;
    const double arg = beta * std::sqrt(std::max(0.0, 1.0 - x * x));
    return std::cyl_bessel_i(0.0, arg) / std::cyl_bessel_i(0.0, beta);
}

double sinc(double t) {
    if (t == 0.0) return 1.0;
    const double x = std::numbers::pi * t;
    return std::sin(x) / x;
}

double windowed_sinc(double t, double half_width, double beta) {
    if (std::abs(t) >= half_width) return 0.0;
    return sinc(t) * kaiser(t / half_width, beta);
}

double kaiser_beta(double attenuation_db) {
    if (attenuation_db > 50.0) return 0.1102 * (attenuation_db - 8.7);
    if (attenuation_db >= 21.0) {
        return 0.5842 * std::pow(attenuation_db - 21.0, 0.4) + 0.07886 * (attenuation_db - 21.0);
    }
    return 0.0;
}

}  // namespace sonoloc::dsp
