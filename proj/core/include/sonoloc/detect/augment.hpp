#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sonoloc::detect {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// Training-time waveform augmentations: gain, additive Gaussian noise and
/// amplitude clipping. Each copy draws its parameters uniformly from the ranges.
struct AugmentationSpec {
    Range gain_db{-6.0, 6.0};
    Range noise_snr_db{10.0, 30.0};
    // Clip level as a fraction of the copy's peak amplitude (1 = no clipping).
    Range clip_fraction{0.5, 1.0};
    std::uint64_t seed = 0;
    std::size_t copies = 2;

    void validate() const;
};

struct AugmentationDraw {
    double gain_db = 0.0;
    double snr_db = 0.0;
    double clip_fraction = 1.0;
};

AugmentationDraw draw_augmentation(const AugmentationSpec& spec, std::mt19937_64& rng);

/// Gain, then noise at the drawn SNR relative to the scaled signal, then
/// symmetric clipping at clip_fraction * peak.
std::vector<double> apply_augmentation(std::span<const double> audio, const AugmentationDraw& draw,
                                       std::mt19937_64& rng);

}  // namespace sonoloc::detect
