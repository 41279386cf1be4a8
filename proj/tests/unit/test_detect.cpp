#include "oracles.hpp"

#include "sonoloc/detect/augment.hpp"
#include "sonoloc/detect/classifier.hpp"
#include "sonoloc/detect/evaluation.hpp"
#include "sonoloc/detect/events.hpp"
#include "sonoloc/detect/features.hpp"
#include "sonoloc/errors.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace sonoloc;
using namespace sonoloc::detect;

namespace {

PredictionSequence seq(std::vector<std::uint8_t> labels) {
    PredictionSequence p;
    p.labels = std::move(labels);
    return p;
}

EventList frames(const std::vector<std::int64_t>& f) {
    EventList l;
    for (std::int64_t k : f) l.events.push_back({k, 0.02 * static_cast<double>(k), 0});
    return l;
}

TrainingSet random_set(std::mt19937_64& rng, std::size_t n, std::size_t dim, bool separable) {
    std::normal_distribution<double> g;
    TrainingSet s;
    s.dim = dim;
    std::vector<double> w(dim);
    for (double& v : w) v = g(rng);
    for (std::size_t i = 0; i < n; ++i) {
        double dot = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double x = g(rng);
            s.x.push_back(x);
            dot += w[d] * x;
        }
        if (separable) {
            // Push points away from the hyperplane to leave a margin.
            const double shift = dot >= 0 ? 0.5 : -0.5;
            for (std::size_t d = 0; d < dim; ++d) s.x[i * dim + d] += shift * w[d];
            s.y.push_back(dot >= 0 ? 1 : 0);
        } else {
            s.y.push_back(static_cast<std::uint8_t>(rng() % 2));
        }
        s.sample_weight.push_back(0.5 + static_cast<double>(rng() % 100) / 100.0);
    }
    return s;
}

double f1_of(const std::vector<std::uint8_t>& pred, const std::vector<std::uint8_t>& truth) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        tp += pred[i] && truth[i];
        fp += pred[i] && !truth[i];
        fn += !pred[i] && truth[i];
    }
    return metrics_from_counts(tp, fp, fn).f1;
}

}  // namespace

TEST(Features, FrameCountAndSilence) {
    dsp::SpectrogramConfig cfg;
    const auto f = extract_features(std::vector<double>(20 * 16000, 0.0), cfg);
    EXPECT_EQ(f.n_frames, 993u);
    EXPECT_EQ(f.dim, 128u);
    for (std::size_t k = 1; k < f.n_frames; ++k)
        for (std::size_t d = 0; d < f.dim; ++d) ASSERT_EQ(f.frame(k)[d], f.frame(0)[d]);
}

TEST(Features, ImpulseAlignment) {
    dsp::SpectrogramConfig cfg;
    std::vector<double> x(2 * 16000, 0.0);
    x[16000] = 1.0;
    const auto f = extract_features(x, cfg);
    std::size_t best = 0;
    double best_e = -1e300;
    for (std::size_t k = 0; k < f.n_frames; ++k) {
        const auto row = f.frame(k);
        const double e = std::accumulate(row.begin(), row.end(), 0.0);
        if (e > best_e) {
            best_e = e;
            best = k;
        }
    }
    const double start = static_cast<double>(best) * cfg.hop_len;
    EXPECT_LE(start, 1.0);
    EXPECT_GT(start + cfg.window_len, 1.0);
    // The Hann peak puts the impulse near the window center.
    EXPECT_NEAR(start + 0.5 * cfg.window_len, 1.0, cfg.hop_len);
}

TEST(Features, LabelsAndAnchorsAgree) {
    dsp::SpectrogramConfig cfg;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.3, 1.5);
    for (int i = 0; i < 500; ++i) {
        const double t = u(rng);
        const std::vector<sim::Interval> span{{t, t + 0.012}};
        const auto labels = frame_labels(span, 100, cfg);
        const auto first = static_cast<std::int64_t>(std::find(labels.begin(), labels.end(), 1) - labels.begin());
        EXPECT_EQ(first, frame_of_time(t, cfg)) << t;
        EXPECT_LE(time_of_frame(first, cfg), t + 1e-12);
        EXPECT_GT(time_of_frame(first + 1, cfg), t);
    }
}

TEST(Classifier, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 5; ++trial) {
        const TrainingSet data = random_set(rng, 60, 12, false);
        std::vector<double> w(12);
        for (double& v : w) v = 0.5 * g(rng);
        const double b = g(rng);
        std::vector<double> gw(12);
        double gb = 0.0;
        logistic_gradient(data, w, b, 1e-2, gw, gb);
        const double h = 1e-5;
        double max_diff = 0.0;
        for (std::size_t d = 0; d < w.size(); ++d) {
            auto wp = w, wm = w;
            wp[d] += h;
            wm[d] -= h;
            const double fd = (logistic_loss(data, wp, b, 1e-2) - logistic_loss(data, wm, b, 1e-2)) / (2 * h);
            max_diff = std::max(max_diff, std::abs(fd - gw[d]));
        }
        const double fdb = (logistic_loss(data, w, b + h, 1e-2) - logistic_loss(data, w, b - h, 1e-2)) / (2 * h);
        max_diff = std::max(max_diff, std::abs(fdb - gb));
        EXPECT_LT(max_diff, 1e-6);
    }
}

TEST(Classifier, SeparableDataFitsExactly) {
    std::mt19937_64 rng(3);
    const TrainingSet data = random_set(rng, 300, 8, true);
    TrainConfig cfg;
    cfg.epochs = 500;
    cfg.l2 = 0.0;
    const ClassifierModel m = fit_logistic(data, cfg);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) correct += (m.probability(data.row(i)) >= 0.5) == (data.y[i] == 1);
    EXPECT_EQ(correct, data.size());
}

TEST(Classifier, LossNeverIncreases) {
    std::mt19937_64 rng(4);
    const TrainingSet data = random_set(rng, 200, 10, false);
    TrainConfig cfg;
    cfg.epochs = 100;
    cfg.learning_rate = 5.0;  // large enough to trigger step halving
    std::vector<double> history;
    fit_logistic(data, cfg, &history);
    ASSERT_EQ(history.size(), 101u);
    for (std::size_t i = 1; i < history.size(); ++i) EXPECT_LE(history[i], history[i - 1] + 1e-15);
}

TEST(Classifier, ShuffledLabelsStayAtChance) {
    std::mt19937_64 rng(5);
    TrainingSet train = random_set(rng, 400, 16, false), test = random_set(rng, 400, 16, false);
    const ClassifierModel m = fit_logistic(train, {});
    std::vector<std::uint8_t> pred;
    for (std::size_t i = 0; i < test.size(); ++i) pred.push_back(m.probability(test.row(i)) >= 0.5);
    const double observed = f1_of(pred, test.y);
    std::vector<double> null;
    auto labels = test.y;
    for (int p = 0; p < 300; ++p) {
        std::shuffle(labels.begin(), labels.end(), rng);
        null.push_back(f1_of(pred, labels));
    }
    const double mean = std::accumulate(null.begin(), null.end(), 0.0) / static_cast<double>(null.size());
    double var = 0.0;
    for (double v : null) var += (v - mean) * (v - mean) / static_cast<double>(null.size());
    EXPECT_LT(std::abs(observed - mean), 2.0 * std::sqrt(var));
}

TEST(Classifier, PredictionRules) {
    FeatureSequence silence;
    silence.n_frames = 10;
    silence.dim = 4;
    silence.values.assign(40, std::log(dsp::kLogFloor));
    TrainingSet t;
    t.dim = 4;
    FeatureSequence loud = silence;
    loud.values.assign(40, 0.0);
    t.append(silence, std::vector<std::uint8_t>(10, 0));
    t.append(loud, std::vector<std::uint8_t>(10, 1));
    const ClassifierModel energy = fit_energy_threshold(t);
    EXPECT_EQ(energy.kind, ClassifierKind::energy_threshold);
    const auto off = predict_sequence(energy, silence);
    EXPECT_TRUE(std::all_of(off.labels.begin(), off.labels.end(), [](auto v) { return v == 0; }));
    ClassifierModel on;
    on.dim = 4;
    on.weights.assign(4, 1.0);
    on.bias = 1e3;
    const auto all = predict_sequence(on, silence);
    EXPECT_TRUE(std::all_of(all.labels.begin(), all.labels.end(), [](auto v) { return v == 1; }));
    FeatureSequence wrong = silence;
    wrong.dim = 3;
    wrong.values.resize(30);
    EXPECT_THROW(predict_sequence(on, wrong), DimensionMismatch);
}

TEST(Classifier, ReproducesSeparableTrainingLabels) {
    std::mt19937_64 rng(6);
    const TrainingSet data = random_set(rng, 120, 6, true);
    const ClassifierModel m = fit_logistic(data, {});
    FeatureSequence f;
    f.n_frames = data.size();
    f.dim = data.dim;
    f.values = data.x;
    EXPECT_EQ(predict_sequence(m, f).labels, data.y);
}

TEST(Classifier, SingleClassFallsBack) {
    std::vector<LabeledClip> clips(2);
    for (auto& c : clips) c.audio.assign(16000, 0.0);
    clips[1].id = "b";
    const std::vector<std::size_t> idx{0, 1};
    AugmentationSpec aug;
    aug.copies = 0;
    const ClassifierModel m = train_on_clips(clips, idx, aug, {}, 0);
    EXPECT_TRUE(m.degenerate_labels);
    EXPECT_EQ(m.kind, ClassifierKind::energy_threshold);
}

TEST(Transitions, Examples) {
    EXPECT_EQ(transitions_to_events(seq({0, 0, 1, 1, 0, 1})).size(), 2u);
    const auto ev = transitions_to_events(seq({0, 0, 1, 1, 0, 1}));
    EXPECT_EQ(ev.events[0].hop_frame, 2);
    EXPECT_EQ(ev.events[1].hop_frame, 5);
    EXPECT_TRUE(transitions_to_events(seq({0, 0, 0})).empty());
    const auto lead = transitions_to_events(seq({1, 1, 1}));
    ASSERT_EQ(lead.size(), 1u);
    EXPECT_EQ(lead.events[0].hop_frame, 0);
}

TEST(Transitions, EventTimesAndVideoFrames) {
    PredictionSequence p = seq({0, 0, 0, 1});
    p.origin_time = 0.1;
    const auto ev = transitions_to_events(p);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_NEAR(ev.events[0].time, 0.16, 1e-12);
    EXPECT_EQ(ev.events[0].video_frame, 4);
}

TEST(DetectionProperties, RandomSequences) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 1 + rng() % 80;
        const double density = 0.1 + 0.8 * static_cast<double>(rng() % 100) / 100.0;
        std::bernoulli_distribution bit(density);
        std::vector<std::uint8_t> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = bit(rng);
            b[i] = bit(rng);
        }
        std::size_t rising = 0;
        for (std::size_t i = 0; i < n; ++i) rising += a[i] && (i == 0 || !a[i - 1]);
        const auto pred = transitions_to_events(seq(a)), gt = transitions_to_events(seq(b));
        ASSERT_EQ(pred.size(), rising);

        std::vector<std::int64_t> pf, gf;
        for (const auto& e : pred.events) pf.push_back(e.hop_frame);
        for (const auto& e : gt.events) gf.push_back(e.hop_frame);
        const int j = 1 + static_cast<int>(rng() % 10);
        const auto hard = match_events(pred, gt, MatchConfig::hard());
        const auto relaxed = match_events(pred, gt, MatchConfig::relaxed(j));
        ASSERT_EQ(hard.tp, oracle::max_matching(pf, gf, 0));
        ASSERT_EQ(relaxed.tp, oracle::max_matching(pf, gf, j));
        ASSERT_EQ(relaxed.tp, match_events(gt, pred, MatchConfig::relaxed(j)).tp);
        ASSERT_EQ(relaxed.tp + relaxed.fp, pred.size());
        ASSERT_EQ(relaxed.tp + relaxed.fn, gt.size());
        ASSERT_LE(hard.tp, relaxed.tp);
        ASSERT_LE(hard.precision, relaxed.precision);
        ASSERT_LE(hard.recall, relaxed.recall);
        ASSERT_LE(hard.f1, relaxed.f1);
        ASSERT_LE(relaxed.tp, match_events(pred, gt, MatchConfig::relaxed(j + 1)).tp);
    }
}

TEST(Matching, Examples) {
    auto r = match_events(frames({11}), frames({10}), MatchConfig::relaxed(1));
    EXPECT_EQ(r.tp, 1u);
    EXPECT_DOUBLE_EQ(r.f1, 1.0);
    r = match_events(frames({11}), frames({10}), MatchConfig::hard());
    EXPECT_EQ(r.fp, 1u);
    EXPECT_EQ(r.fn, 1u);
    EXPECT_DOUBLE_EQ(r.f1, 0.0);
    r = match_events(frames({5, 10}), frames({10}), MatchConfig::relaxed(1));
    EXPECT_EQ(r.tp, 1u);
    EXPECT_EQ(r.fp, 1u);
    EXPECT_DOUBLE_EQ(r.precision, 0.5);
    EXPECT_DOUBLE_EQ(r.recall, 1.0);
    EXPECT_NEAR(r.f1, 2.0 / 3.0, 1e-15);
    // Window is symmetric about the ground truth.
    EXPECT_EQ(match_events(frames({9}), frames({10}), MatchConfig::relaxed(1)).tp, 1u);
    EXPECT_EQ(match_events(frames({8}), frames({10}), MatchConfig::relaxed(1)).tp, 0u);
}

TEST(Matching, EmptyConventions) {
    const auto none = match_events(frames({}), frames({}), MatchConfig::hard());
    EXPECT_DOUBLE_EQ(none.f1, 1.0);
    const auto no_pred = match_events(frames({}), frames({3}), MatchConfig::hard());
    EXPECT_DOUBLE_EQ(no_pred.precision, 0.0);
    EXPECT_DOUBLE_EQ(no_pred.f1, 0.0);
    EXPECT_THROW(MatchConfig({MatchMode::hard, 2}).validate(), InvalidArgument);
}

TEST(Matching, AggregateUsesPopulationStd) {
    const std::vector<MatchResult> folds{metrics_from_counts(1, 0, 0), metrics_from_counts(0, 1, 1)};
    const auto m = aggregate_metrics(folds);
    EXPECT_DOUBLE_EQ(m.f1.mean, 0.5);
    EXPECT_DOUBLE_EQ(m.f1.std, 0.5);
}

TEST(KFold, Sizes) {
    auto sizes = [](const std::vector<std::size_t>& f, std::size_t k) {
        std::vector<std::size_t> s(k, 0);
        for (std::size_t v : f) ++s[v];
        return s;
    };
    EXPECT_EQ(sizes(kfold_split(6, 3, 1), 3), (std::vector<std::size_t>{2, 2, 2}));
    EXPECT_EQ(sizes(kfold_split(9, 2, 1), 2), (std::vector<std::size_t>{5, 4}));
    EXPECT_EQ(kfold_split(4, 1, 1), (std::vector<std::size_t>{0, 0, 0, 0}));
    EXPECT_EQ(kfold_split(9, 3, 4), kfold_split(9, 3, 4));
    EXPECT_THROW(kfold_split(2, 3, 0), InvalidArgument);
}

TEST(Triggers, Schedules) {
    const auto chisel = localize::chiseling_profile();
    EventList ev;
    ev.events = {{0, 1.0, 25}, {0, 2.0, 50}};
    EXPECT_EQ(trigger_schedule(ev, chisel, 3.0), (std::vector<double>{1.0, 2.0}));
    EventList one;
    one.events = {{0, 1.0, 25}};
    const auto saw = trigger_schedule(one, localize::sawing_profile(), 1.2);
    const std::vector<double> expected{1.0, 1.04, 1.08, 1.12, 1.16, 1.2};
    ASSERT_EQ(saw.size(), expected.size());
    for (std::size_t i = 0; i < saw.size(); ++i) EXPECT_NEAR(saw[i], expected[i], 1e-12);
    EXPECT_TRUE(trigger_schedule(EventList{}, chisel, 3.0).empty());
    EventList two;
    two.events = {{0, 1.0, 25}, {0, 1.1, 27}};
    const auto gap = trigger_schedule(two, localize::drilling_profile(), 1.1);
    ASSERT_EQ(gap.size(), 4u);  // 1.0 1.04 1.08 | 1.1
    EXPECT_NEAR(gap[3], 1.1, 1e-12);
}

TEST(Augment, DrawsInsideRangesAndIsSeeded) {
    AugmentationSpec spec;
    std::mt19937_64 a(9), b(9);
    for (int i = 0; i < 100; ++i) {
        const auto d = draw_augmentation(spec, a);
        EXPECT_GE(d.gain_db, -6.0);
        EXPECT_LE(d.gain_db, 6.0);
        EXPECT_GE(d.snr_db, 10.0);
        EXPECT_LE(d.clip_fraction, 1.0);
        const auto e = draw_augmentation(spec, b);
        EXPECT_EQ(d.gain_db, e.gain_db);
    }
}

TEST(Augment, AppliesGainNoiseAndClipping) {
    std::vector<double> x(16000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.05 * static_cast<double>(i));
    std::mt19937_64 rng(3);
    const auto gain_only = apply_augmentation(x, {20.0 * std::log10(2.0), 200.0, 1.0}, rng);
    for (std::size_t i = 0; i < x.size(); i += 97) EXPECT_NEAR(gain_only[i], 2.0 * x[i], 1e-6);
    const auto clipped = apply_augmentation(x, {0.0, 200.0, 0.5}, rng);
    const double peak = *std::max_element(clipped.begin(), clipped.end());
    EXPECT_LE(peak, 0.5 + 1e-6);
    const auto noisy = apply_augmentation(x, {0.0, 10.0, 1.0}, rng);
    double ps = 0.0, pn = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ps += x[i] * x[i];
        pn += (noisy[i] - x[i]) * (noisy[i] - x[i]);
    }
    EXPECT_NEAR(10.0 * std::log10(ps / pn), 10.0, 0.3);
}
