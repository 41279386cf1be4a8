#pragma once

#include "sonoloc/beamform/heatmap.hpp"
#include "sonoloc/sim/array.hpp"

#include <vector>

namespace sonoloc::beamform {

/// Per-cell, per-mic steering delays (samples) and distance weights.
struct SteeringTable {
    ScanGrid grid;
    sim::MicArray array;
    double speed_of_sound = 343.0;
    std::vector<double> delays;           // cells * mics, minimum over mics removed
    std::vector<double> weights;          // cells * mics, mean 1 per cell
    std::vector<double> reference_delay;  // cells, the removed minimum

    std::size_t mics() const { return array.size(); }
    double delay(std::size_t cell, std::size_t mic) const { return delays[cell * mics() + mic]; }
    double weight(std::size_t cell, std::size_t mic) const { return weights[cell * mics() + mic]; }
};

/// delay = (|cell - mic| - min over mics) / c * fs; weight = |cell - mic|
/// normalized to mean 1 per cell, compensating 1/r spreading.
SteeringTable compute_steering(const sim::MicArray& array, const ScanGrid& grid, double speed_of_sound);

}  // namespace sonoloc::beamform
