#pragma once

#include "sonoloc/dsp/bandpass.hpp"
#include "sonoloc/geometry.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sonoloc::localize {

/// Replace the predicted box by a cube of `edge` meters around the weighted
/// centroid of the selected cluster.
struct FixedCube {
    double edge = 0.05;
};

/// Clamp each predicted-box extent to the instrument's size along that axis.
struct InstrumentExtents {
    Vec3 extents = Vec3(0.24, 0.07, 0.07);
};

using BoxRule = std::variant<FixedCube, InstrumentExtents>;

enum class TriggerMode { impulsive, continuous };

/// Per-action configuration: band-pass range, box rule, detection tolerance
/// and trigger scheme.
struct ActionProfile {
    std::string name;
    std::optional<dsp::BandpassSpec> band;
    BoxRule box_rule = FixedCube{};
    int j = 1;  // relaxed matching tolerance in hop frames
    TriggerMode trigger_mode = TriggerMode::impulsive;
    int folds = 3;                   // k for cross validation
    std::size_t clips = 6;           // recordings per action in the reference protocol
    double trigger_interval = 0.04;  // continuous actions: one localization per video frame

    void validate() const;
};

ActionProfile chiseling_profile();
ActionProfile sawing_profile();
ActionProfile drilling_profile();

/// Looks up "chiseling", "sawing" or "drilling"; throws InvalidArgument otherwise.
ActionProfile profile_by_name(std::string_view name);
std::vector<std::string> profile_names();

std::string_view to_string(TriggerMode mode);

}  // namespace sonoloc::localize
