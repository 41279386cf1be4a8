#pragma once

#include "sonoloc/detect/classifier.hpp"
#include "sonoloc/detect/features.hpp"
#include "sonoloc/localize/profile.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sonoloc::detect {

struct PredictionSequence {
    std::vector<std::uint8_t> labels;  // one 0/1 decision per hop frame
    double hop_len = 0.02;
    double origin_time = 0.0;

    void validate() const;
};

struct Event {
    std::int64_t hop_frame = 0;
    double time = 0.0;
    std::int64_t video_frame = 0;
};

struct EventList {
    std::vector<Event> events;

    std::size_t size() const { return events.size(); }
    bool empty() const { return events.empty(); }
    std::vector<double> times() const;
    /// Throws InvalidArgument unless times are strictly increasing.
    void validate() const;
};

/// Per-frame decision p >= model.decision_threshold.
PredictionSequence predict_sequence(const ClassifierModel& model, const FeatureSequence& features);

/// Thresholds externally computed per-frame probabilities.
PredictionSequence threshold_probabilities(std::span<const double> probabilities, double threshold, double hop_len,
                                           double origin_time);

/// One event per 0->1 transition at the first 1 (a leading 1 counts).
EventList transitions_to_events(const PredictionSequence& pred);

/// Ground-truth events at the given times, assigned to the hop frame whose
/// slot contains each time.
EventList events_from_times(std::span<const double> times, const dsp::SpectrogramConfig& config);

/// Localization timestamps: one per event for impulsive actions; for
/// continuous actions every `interval` from each event up to (excluding) the
/// next event, and up to and including `clip_end` after the last one.
std::vector<double> trigger_schedule(const EventList& events, const localize::ActionProfile& profile, double clip_end);

}  // namespace sonoloc::detect
