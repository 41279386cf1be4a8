#pragma once

#include "sonoloc/detect/events.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sonoloc::detect {

enum class MatchMode { hard, relaxed };

struct MatchConfig {
    MatchMode mode = MatchMode::relaxed;
    int j = 1;  // tolerance in hop frames; must be 0 for hard matching

    static MatchConfig hard() { return {MatchMode::hard, 0}; }
    static MatchConfig relaxed(int j) { return {MatchMode::relaxed, j}; }
    void validate() const;
};

struct MatchResult {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Precision, recall and F1 from counts. All three counts zero gives 1;
/// a zero denominator otherwise gives 0.
MatchResult metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

/// One-to-one matching on hop frames. Ground-truth events are visited in time
/// order and each takes the earliest unmatched prediction within +-j frames.
/// Because all tolerance windows have equal width this yields a maximum
/// matching, so TP is symmetric in the two lists and non-decreasing in j.
MatchResult match_events(const EventList& pred, const EventList& gt, const MatchConfig& config);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation over folds
};

struct DetectionMetrics {
    MeanStd precision;
    MeanStd recall;
    MeanStd f1;
    std::vector<MatchResult> folds;
};

DetectionMetrics aggregate_metrics(std::span<const MatchResult> per_fold);

/// Clip-level fold id per clip: a seeded shuffle dealt round-robin, so fold
/// sizes differ by at most one.
std::vector<std::size_t> kfold_split(std::size_t n_clips, std::size_t k, std::uint64_t seed);

}  // namespace sonoloc::detect
