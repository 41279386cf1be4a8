#include "sonoloc/localize/profile.hpp"

#include "sonoloc/errors.hpp"

namespace sonoloc::localize {

void ActionProfile::validate() const {
    if (const auto* cube = std::get_if<FixedCube>(&box_rule); cube && !(cube->edge > 0.0)) {
        throw InvalidArgument("profile " + name + ": cube edge must be positive");
    }
    if (const auto* inst = std::get_if<InstrumentExtents>(&box_rule); inst && !(inst->extents.array() > 0.0).all()) {
        throw InvalidArgument("profile " + name + ": instrument extents must be positive");
    }
    if (j < 0) throw InvalidArgument("profile " + name + ": j must be >= 0");
    if (folds < 1) throw InvalidArgument("profile " + name + ": folds must be >= 1");
    if (!(trigger_interval > 0.0)) throw InvalidArgument("profile " + name + ": trigger interval must be positive");
}

ActionProfile chiseling_profile() {
    ActionProfile p;
    p.name = "chiseling";
    p.band = std::nullopt;
    p.box_rule = FixedCube{0.05};
    p.j = 1;
    p.trigger_mode = TriggerMode::impulsive;
    p.folds = 3;
    p.clips = 6;
    return p;
}

ActionProfile sawing_profile() {
    ActionProfile p;
    p.name = "sawing";
    p.band = dsp::BandpassSpec{1000.0, 5000.0, 4};
    p.box_rule = InstrumentExtents{Vec3(0.24, 0.07, 0.07)};
    p.j = 3;
    p.trigger_mode = TriggerMode::continuous;
    p.folds = 2;
    p.clips = 9;
    return p;
}

ActionProfile drilling_profile() {
    ActionProfile p;
    p.name = "drilling";
    p.band = dsp::BandpassSpec{1000.0, 10000.0, 4};
    p.box_rule = InstrumentExtents{Vec3(0.22, 0.08, 0.16)};
    p.j = 10;
    p.trigger_mode = TriggerMode::continuous;
    p.folds = 3;
    p.clips = 5;
    return p;
}

ActionProfile profile_by_name(std::string_view name) {
    if (name == "chiseling") return chiseling_profile();
    if (name == "sawing") return sawing_profile();
    if (name == "drilling") return drilling_profile();
    throw InvalidArgument("unknown action profile '" + std::string(name) + "' (expected chiseling, sawing or drilling)");
}

std::vector<std::string> profile_names() { return {"chiseling", "drilling", "sawing"}; }

std::string_view to_string(TriggerMode mode) { return mode == TriggerMode::impulsive ? "impulsive" : "continuous"; }

}  // namespace sonoloc::localize
