#pragma once

#include "sonoloc/geometry.hpp"

#include <cstddef>
#include <vector>

namespace sonoloc::sim {

/// Microphone positions in the array frame (meters).
struct MicArray {
    std::vector<Vec3> positions;
    double sample_rate = 192000.0;

    std::size_t size() const { return positions.size(); }
    void validate() const;
};

/// n microphones evenly spaced on a circle in the z = 0 plane, first mic on +x.
MicArray make_ring_array(std::size_t n, double radius, double sample_rate);

inline constexpr std::size_t kRingMics = 48;
inline constexpr double kRingRadius = 0.35;
inline constexpr double kArraySampleRate = 192000.0;

}  // namespace sonoloc::sim
