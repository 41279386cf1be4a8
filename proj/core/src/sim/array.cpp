#include "sonoloc/sim/array.hpp"

#include "sonoloc/errors.hpp"

#include <cmath>
#include <numbers>

namespace sonoloc::sim {

void MicArray::validate() const {
    if (positions.size() < 2) throw InvalidArgument("mic array needs at least 2 microphones");
    for (const Vec3& p : positions) {
        if (!p.allFinite()) throw InvalidArgument("mic array position is not finite");
    }
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) throw InvalidArgument("mic array sample rate must be positive");
}

MicArray make_ring_array(std::size_t n, double radius, double sample_rate) {
    if (n < 2) throw InvalidArgument("ring array needs n >= 2");
    if (!(radius > 0.0)) throw InvalidArgument("ring array radius must be positive");
    MicArray array;
    array.sample_rate = sample_rate;
    array.positions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        array.positions.emplace_back(radius * std::cos(angle), radius * std::sin(angle), 0.0);
    }
    array.validate();
    return array;
}

}  // namespace sonoloc::sim
