#include "sonoloc/beamform/steering.hpp"

#include "sonoloc/errors.hpp"

#include <algorithm>
#include <limits>

namespace sonoloc::beamform {

SteeringTable compute_steering(const sim::MicArray& array, const ScanGrid& grid, double speed_of_sound) {
    array.validate();
    grid.validate();
    if (!(speed_of_sound > 0.0)) throw InvalidArgument("steering: speed of sound must be positive");

    SteeringTable table;
    table.grid = grid;
    table.array = array;
    table.speed_of_sound = speed_of_sound;
    const std::size_t m = array.size();
    const std::size_t cells = grid.cells();
    table.delays.resize(cells * m);
    table.weights.resize(cells * m);
    table.reference_delay.resize(cells);

    const double samples_per_meter = array.sample_rate / speed_of_sound;
    std::vector<double> dist(m);
    for (std::size_t c = 0; c < cells; ++c) {
        const Vec3 p = grid.cell_center(c);
        double nearest = std::numeric_limits<double>::infinity();
        double total = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            dist[k] = (p - array.positions[k]).norm();
            nearest = std::min(nearest, dist[k]);
            total += dist[k];
        }
        const double mean = total / static_cast<double>(m);
        table.reference_delay[c] = nearest * samples_per_meter;
        for (std::size_t k = 0; k < m; ++k) {
            table.delays[c * m + k] = (dist[k] - nearest) * samples_per_meter;
            table.weights[c * m + k] = dist[k] / mean;
        }
    }
    return table;
}

}  // namespace sonoloc::beamform
