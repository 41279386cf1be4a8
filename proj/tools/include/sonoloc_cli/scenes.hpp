#pragma once

#include "sonoloc/localize/profile.hpp"
#include "sonoloc/sim/scene.hpp"

#include <cstdint>
#include <optional>

namespace sonoloc::cli {

/// Workbench scene for one clip of an action: a 48-mic ring at the world
/// origin, an RGB-D camera 5 cm above it, a bone-like block whose front face
/// lies on the 1 m scan plane, a table and a sphere as distractors. The
/// instrument source sits on the block's front face at a per-clip random
/// position.
///
/// chiseling: band-limited clicks at jittered onsets.
/// sawing / drilling: band-limited noise in the profile band during
/// jittered active intervals.
sim::SyntheticScene default_scene(const localize::ActionProfile& profile, std::size_t clip_index, std::uint64_t seed,
                                  double duration, std::optional<double> snr_db);

}  // namespace sonoloc::cli
