#include "sonoloc/detect/evaluation.hpp"

#include "sonoloc/errors.hpp"
#include "sonoloc/sim/waveform.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

namespace sonoloc::detect {

void MatchConfig::validate() const {
    if (j < 0) throw InvalidArgument("match tolerance must be non-negative");
    if (mode == MatchMode::hard && j != 0) throw InvalidArgument("hard matching requires j = 0");
}

MatchResult metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
    MatchResult r{tp, fp, fn, 0.0, 0.0, 0.0};
    if (tp + fp + fn == 0) {
        r.precision = r.recall = r.f1 = 1.0;
        return r;
    }
    const auto t = static_cast<double>(tp);
    r.precision = tp + fp > 0 ? t / static_cast<double>(tp + fp) : 0.0;
    r.recall = tp + fn > 0 ? t / static_cast<double>(tp + fn) : 0.0;
    r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    return r;
}

MatchResult match_events(const EventList& pred, const EventList& gt, const MatchConfig& config) {
    config.validate();
    pred.validate();
    gt.validate();
    const std::int64_t j = config.mode == MatchMode::hard ? 0 : config.j;
    std::size_t tp = 0;
    std::size_t p = 0;
    for (const Event& g : gt.events) {
        while (p < pred.size() && pred.events[p].hop_frame < g.hop_frame - j) ++p;
        if (p < pred.size() && pred.events[p].hop_frame <= g.hop_frame + j) {
            ++tp;
            ++p;
        }
    }
    return metrics_from_counts(tp, pred.size() - tp, gt.size() - tp);
}

DetectionMetrics aggregate_metrics(std::span<const MatchResult> per_fold) {
    DetectionMetrics m;
    m.folds.assign(per_fold.begin(), per_fold.end());
    if (per_fold.empty()) return m;
    const auto n = static_cast<double>(per_fold.size());
    auto stats = [&](auto field) {
        double mean = 0.0;
        for (const MatchResult& r : per_fold) mean += field(r);
        mean /= n;
        double var = 0.0;
        for (const MatchResult& r : per_fold) var += (field(r) - mean) * (field(r) - mean);
        return MeanStd{mean, std::sqrt(var / n)};
    };
    m.precision = stats([](const MatchResult& r) { return r.precision; });
    m.recall = stats([](const MatchResult& r) { return r.recall; });
    m.f1 = stats([](const MatchResult& r) { return r.f1; });
    return m;
}

std::vector<std::size_t> kfold_split(std::size_t n_clips, std::size_t k, std::uint64_t seed) {
    if (k == 0 || k > n_clips) throw InvalidArgument("fold count must lie in [1, number of clips]");
    std::vector<std::size_t> order(n_clips);
    std::iota(order.begin(), order.end(), 0);
    // Fisher-Yates with our own generator so the split is identical across standard libraries.
    std::uint64_t state = seed;
    for (std::size_t i = n_clips; i > 1; --i) {
        state = sim::mix_seed(state, i);
        std::swap(order[i - 1], order[state % i]);
    }
    std::vector<std::size_t> fold(n_clips);
    for (std::size_t i = 0; i < n_clips; ++i) fold[order[i]] = i % k;
    return fold;
}

}  // namespace sonoloc::detect
