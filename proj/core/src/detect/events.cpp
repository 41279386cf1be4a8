#include "sonoloc/detect/events.hpp"

#include "sonoloc/beamform/heatmap.hpp"
#include "sonoloc/errors.hpp"

#include <cmath>

namespace sonoloc::detect {

void PredictionSequence::validate() const {
    if (!(hop_len > 0.0)) throw InvalidArgument("hop length must be positive");
    for (std::uint8_t v : labels) {
        if (v > 1) throw InvalidArgument("prediction labels must be 0 or 1");
    }
}

std::vector<double> EventList::times() const {
    std::vector<double> t;
    t.reserve(events.size());
    for (const Event& e : events) t.push_back(e.time);
    return t;
}

void EventList::validate() const {
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (!(events[i].time > events[i - 1].time)) throw InvalidArgument("event times must be strictly increasing");
    }
}

PredictionSequence predict_sequence(const ClassifierModel& model, const FeatureSequence& features) {
    if (features.dim != model.dim) throw DimensionMismatch("feature dimension does not match classifier");
    PredictionSequence pred;
    pred.hop_len = features.hop_len;
    pred.origin_time = features.origin_time;
    pred.labels.resize(features.n_frames);
    for (std::size_t k = 0; k < features.n_frames; ++k) {
        pred.labels[k] = model.probability(features.frame(k)) >= model.decision_threshold ? 1 : 0;
    }
    return pred;
}

PredictionSequence threshold_probabilities(std::span<const double> probabilities, double threshold, double hop_len,
                                           double origin_time) {
    PredictionSequence pred;
    pred.hop_len = hop_len;
    pred.origin_time = origin_time;
    pred.labels.reserve(probabilities.size());
    for (double p : probabilities) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probabilities must lie in [0, 1]");
        pred.labels.push_back(p >= threshold ? 1 : 0);
    }
    pred.validate();
    return pred;
}

EventList transitions_to_events(const PredictionSequence& pred) {
    EventList out;
    std::uint8_t prev = 0;
    for (std::size_t k = 0; k < pred.labels.size(); ++k) {
        if (pred.labels[k] && !prev) {
            Event e;
            e.hop_frame = static_cast<std::int64_t>(k);
            e.time = pred.origin_time + static_cast<double>(k) * pred.hop_len;
            e.video_frame = beamform::video_frame_at(e.time);
            out.events.push_back(e);
        }
        prev = pred.labels[k];
    }
    return out;
}

EventList events_from_times(std::span<const double> times, const dsp::SpectrogramConfig& config) {
    EventList out;
    for (double t : times) {
        out.events.push_back({frame_of_time(t, config), t, beamform::video_frame_at(t)});
    }
    out.validate();
    return out;
}

std::vector<double> trigger_schedule(const EventList& events, const localize::ActionProfile& profile,
                                     double clip_end) {
    events.validate();
    std::vector<double> out;
    if (profile.trigger_mode == localize::TriggerMode::impulsive) {
        for (const Event& e : events.events) out.push_back(e.time);
        return out;
    }
    const double step = profile.trigger_interval;
    if (!(step > 0.0)) throw InvalidArgument("trigger interval must be positive");
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double t0 = events.events[i].time;
        if (t0 > clip_end) break;
        std::size_t count;
        if (i + 1 < events.size()) {
            const double span = events.events[i + 1].time - t0;
            count = static_cast<std::size_t>(std::ceil(span / step - 1e-9));
        } else {
            count = static_cast<std::size_t>(std::floor((clip_end - t0) / step + 1e-9)) + 1;
        }
        for (std::size_t n = 0; n < count; ++n) out.push_back(t0 + static_cast<double>(n) * step);
    }
    return out;
}

}  // namespace sonoloc::detect
