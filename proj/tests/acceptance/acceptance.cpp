// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "oracles.hpp"

#include "sonoloc/beamform/delay_and_sum.hpp"
#include "sonoloc/beamform/heatmap.hpp"
#include "sonoloc/beamform/steering.hpp"
#include "sonoloc/detect/classifier.hpp"
#include "sonoloc/detect/evaluation.hpp"
#include "sonoloc/detect/events.hpp"
#include "sonoloc/detect/features.hpp"
#include "sonoloc/dsp/resample.hpp"
#include "sonoloc/localize/dbscan.hpp"
#include "sonoloc/localize/iou.hpp"
#include "sonoloc/sim/array.hpp"
#include "sonoloc/sim/propagation.hpp"
#include "sonoloc_cli/scenes.hpp"
#include "sonoloc_cli/stages.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace sonoloc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

MultichannelRecording noise_recording(std::size_t mics, std::size_t n, double fs, std::mt19937_64& rng) {
    std::normal_distribution<float> g;
    MultichannelRecording rec{std::vector<std::vector<float>>(mics, std::vector<float>(n)), fs};
    for (auto& ch : rec.channels)
        for (float& v : ch) v = g(rng);
    return rec;
}

void criterion1() {
    std::mt19937_64 rng(101);
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
        beamform::ScanGrid grid;
        grid.nx = 2 + rng() % 7;
        grid.ny = 2 + rng() % 7;
        grid.width = 0.4 + 0.6 * std::uniform_real_distribution<double>()(rng);
        grid.height = 0.4 + 0.6 * std::uniform_real_distribution<double>()(rng);
        grid.distance = 0.5 + std::uniform_real_distribution<double>()(rng);
        const std::size_t mics = 2 + rng() % 3;
        const double fs = (rng() % 2) ? 192000.0 : 48000.0;
        const auto array = sim::make_ring_array(mics, 0.1 + 0.3 * std::uniform_real_distribution<double>()(rng), fs);
        const auto steering = beamform::compute_steering(array, grid, 343.0);
        const double len = 0.005 + 0.045 * std::uniform_real_distribution<double>()(rng);
        const auto rec = noise_recording(mics, static_cast<std::size_t>(std::ceil((len + 0.01) * fs)), fs, rng);
        const auto fast = beamform::delay_and_sum(rec, steering, {0.005, 0.005 + len});
        const auto ref = oracle::naive_delay_and_sum(rec, steering, 0.005, 0.005 + len);
        for (std::size_t c = 0; c < ref.size(); ++c) worst = std::max(worst, std::abs(fast.values[c] - ref[c]) / ref[c]);
    }
    const double t = seconds_since(t0);
    report(1, worst <= 1e-6 && t < 30.0,
           fmt("delay-and-sum vs naive reference, 25 instances: max rel err %.2e (<= 1e-6), %.1f s (< 30 s)", worst, t));
}

void criterion2() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(-0.35, 0.35);
    const beamform::ScanGrid grid;  // 100 x 100 over 0.8 m at 1 m
    const auto array = sim::make_ring_array(sim::kRingMics, sim::kRingRadius, sim::kArraySampleRate);
    const auto steering = beamform::compute_steering(array, grid, 343.0);
    int hits = 0;
    double worst_time = 0.0;
    for (int i = 0; i < 50; ++i) {
        sim::SyntheticScene scene;
        scene.array = array;
        scene.duration = 0.1;
        scene.snr_db = 20.0;
        sim::SourceSpec src;
        src.position = Vec3(u(rng), u(rng), grid.distance);
        src.waveform = sim::BandLimitedNoise{1500.0, 10000.0};
        scene.sources.push_back(src);
        const auto rec = sim::simulate_propagation(scene, rng());
        const auto t0 = Clock::now();
        const auto h = beamform::delay_and_sum(rec, steering, beamform::video_frame_window(0.03));
        worst_time = std::max(worst_time, seconds_since(t0));
        const auto peak = beamform::heatmap_peak(h);
        const Eigen::Vector2d truth = grid.plane_to_cell(src.position.x(), src.position.y());
        if (std::abs(static_cast<double>(peak.ix) - std::round(truth.x())) <= 1.0 &&
            std::abs(static_cast<double>(peak.iy) - std::round(truth.y())) <= 1.0)
            ++hits;
    }
    report(2, hits >= 48 && worst_time < 2.0,
           fmt("peak within 1 cell in %d/50 scenes (>= 95%%); 100x100 x 48 ch x 40 ms frame: max %.2f s (< 2 s)", hits,
               worst_time));
}

std::vector<Vec3> clustered_points(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 0.4);
    std::normal_distribution<double> g(0.0, 0.025);
    std::vector<Vec3> centers(1 + rng() % 6);
    for (Vec3& c : centers) c = Vec3(u(rng), u(rng), u(rng));
    std::vector<Vec3> p;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 4 == 0) {
            p.emplace_back(u(rng), u(rng), u(rng));
        } else {
            const Vec3& c = centers[rng() % centers.size()];
            p.emplace_back(c.x() + g(rng), c.y() + g(rng), c.z() + g(rng));
        }
    }
    return p;
}

void criterion3() {
    std::mt19937_64 rng(303);
    int weighted_ok = 0, standard_ok = 0, nonempty = 0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + rng() % 2000;
        const auto p = clustered_points(rng, n);
        std::vector<double> w(n);
        for (double& v : w) v = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
        const localize::ClusterParams params{0.03, 5.0 + static_cast<double>(rng() % 40)};
        const auto got = localize::weighted_dbscan(p, w, params);
        std::vector<oracle::RefCluster> mine;
        for (const auto& c : got) mine.push_back({c.members});
        weighted_ok += mine == oracle::brute_weighted_dbscan(p, w, params.radius, params.min_weight);
        nonempty += !got.empty();
    }
    for (int i = 0; i < 20; ++i) {
        const std::size_t n = 200 + rng() % 1800;
        const auto p = clustered_points(rng, n);
        const double weight = 0.25 * static_cast<double>(1 + rng() % 8);
        const std::vector<double> w(n, weight);
        const localize::ClusterParams params{0.02 + 0.01 * std::uniform_real_distribution<double>()(rng),
                                             weight * static_cast<double>(3 + rng() % 15) - 0.5 * weight};
        std::vector<oracle::RefCluster> mine;
        for (const auto& c : localize::weighted_dbscan(p, w, params)) mine.push_back({c.members});
        const auto min_pts = static_cast<std::size_t>(std::ceil(params.min_weight / weight));
        standard_ok += mine == oracle::textbook_dbscan(p, params.radius, min_pts);
    }
    report(3, weighted_ok == 100 && standard_ok == 20,
           fmt("weighted DBSCAN equals O(n^2) reference on %d/100 instances (%d with clusters); equal-weight reduction to "
               "standard DBSCAN on %d/20",
               weighted_ok, nonempty, standard_ok));
}

OrientedBox3 obox(const Vec3& c, const Vec3& half) {
    OrientedBox3 b;
    b.center = c;
    b.half_extents = half;
    return b;
}

void criterion4() {
    const Aabb3 unit{Vec3::Zero(), Vec3::Ones()};
    const double same = localize::iou3d(unit, obox(Vec3::Constant(0.5), Vec3::Constant(0.5)));
    const double apart = localize::iou3d(unit, obox(Vec3::Constant(3.0), Vec3::Constant(0.5)));
    const double half = localize::iou3d(unit, obox(Vec3(1.0, 0.5, 0.5), Vec3::Constant(0.5)));
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> c(-0.04, 0.04), e(0.01, 0.04);
    double worst = 0.0;
    int cases = 0;
    while (cases < 200) {
        const Vec3 a0(c(rng), c(rng), c(rng));
        const Aabb3 pred{a0 - Vec3(e(rng), e(rng), e(rng)), a0 + Vec3(e(rng), e(rng), e(rng))};
        const OrientedBox3 gt = obox(Vec3(c(rng), c(rng), c(rng)), Vec3(e(rng), e(rng), e(rng)));
        const double exact = localize::iou3d(pred, gt);
        if (exact < 0.05) continue;
        worst = std::max(worst, std::abs(localize::iou3d_sampled(pred, gt) - exact) / exact);
        ++cases;
    }
    const bool ok = same == 1.0 && apart == 0.0 && std::abs(half - 1.0 / 3.0) <= 1e-9 && worst <= 0.01;
    report(4, ok,
           fmt("identical %.12f, disjoint %.1f, half-shift %.12f (1/3 +- 1e-9); sampled vs analytic max rel err %.4f "
               "(<= 1%%) over 200 boxes",
               same, apart, half, worst));
}

detect::EventList frames(std::initializer_list<std::int64_t> f) {
    detect::EventList l;
    for (std::int64_t k : f) l.events.push_back({k, 0.02 * static_cast<double>(k), 0});
    return l;
}

detect::PredictionSequence labels(std::vector<std::uint8_t> v) {
    detect::PredictionSequence p;
    p.labels = std::move(v);
    return p;
}

void criterion5() {
    std::mt19937_64 rng(505);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
        const std::size_t n = 1 + rng() % 120;
        std::bernoulli_distribution bit(0.05 + 0.9 * std::uniform_real_distribution<double>()(rng));
        std::vector<std::uint8_t> a(n), b(n);
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = bit(rng);
            b[k] = bit(rng);
        }
        std::size_t rising = 0;
        for (std::size_t k = 0; k < n; ++k) rising += a[k] && (k == 0 || !a[k - 1]);
        const auto pred = detect::transitions_to_events(labels(a));
        const auto gt = detect::transitions_to_events(labels(b));
        std::vector<std::int64_t> pf, gf;
        for (const auto& e : pred.events) pf.push_back(e.hop_frame);
        for (const auto& e : gt.events) gf.push_back(e.hop_frame);
        const int j = 1 + static_cast<int>(rng() % 10);
        const auto hard = detect::match_events(pred, gt, detect::MatchConfig::hard());
        const auto rel = detect::match_events(pred, gt, detect::MatchConfig::relaxed(j));
        const auto back = detect::match_events(gt, pred, detect::MatchConfig::relaxed(j));
        const bool ok = pred.size() == rising && hard.tp == oracle::max_matching(pf, gf, 0) &&
                        rel.tp == oracle::max_matching(pf, gf, j) && rel.tp == back.tp && hard.tp <= rel.tp &&
                        hard.precision <= rel.precision && hard.recall <= rel.recall && hard.f1 <= rel.f1;
        violations += !ok;
    }
    // Worked conventions: a 0 -> 1 change marks an event; +-j frame tolerance.
    const auto ev = detect::transitions_to_events(labels({0, 0, 1, 1, 0, 1}));
    const auto lead = detect::transitions_to_events(labels({1, 1, 1}));
    const auto r1 = detect::match_events(frames({11}), frames({10}), detect::MatchConfig::relaxed(1));
    const auto r2 = detect::match_events(frames({11}), frames({10}), detect::MatchConfig::hard());
    const auto r3 = detect::match_events(frames({5, 10}), frames({10}), detect::MatchConfig::relaxed(1));
    const bool examples = ev.size() == 2 && ev.events[0].hop_frame == 2 && ev.events[1].hop_frame == 5 &&
                          detect::transitions_to_events(labels({0, 0, 0})).empty() && lead.size() == 1 &&
                          lead.events[0].hop_frame == 0 && r1.tp == 1 && r1.f1 == 1.0 && r2.fp == 1 && r2.fn == 1 &&
                          r2.f1 == 0.0 && r3.tp == 1 && r3.fp == 1 && r3.precision == 0.5 && r3.recall == 1.0 &&
                          std::abs(r3.f1 - 2.0 / 3.0) < 1e-15;
    report(5, violations == 0 && examples,
           fmt("10^4 random sequences: %d property violations (transitions, max matching, symmetry, hard <= relaxed); "
               "worked examples %s",
               violations, examples ? "reproduced" : "MISMATCH"));
}

void criterion6() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(606);
    std::normal_distribution<double> g;
    // Finite differences.
    detect::TrainingSet data;
    data.dim = 16;
    for (int i = 0; i < 80; ++i) {
        for (int d = 0; d < 16; ++d) data.x.push_back(g(rng));
        data.y.push_back(static_cast<std::uint8_t>(rng() % 2));
        data.sample_weight.push_back(0.5 + std::uniform_real_distribution<double>()(rng));
    }
    std::vector<double> w(16);
    for (double& v : w) v = 0.3 * g(rng);
    const double b = 0.2, l2 = 1e-3, h = 1e-5;
    std::vector<double> gw(16);
    double gb = 0.0;
    detect::logistic_gradient(data, w, b, l2, gw, gb);
    double fd_err = std::abs((detect::logistic_loss(data, w, b + h, l2) - detect::logistic_loss(data, w, b - h, l2)) / (2 * h) - gb);
    for (std::size_t d = 0; d < w.size(); ++d) {
        auto wp = w, wm = w;
        wp[d] += h;
        wm[d] -= h;
        fd_err = std::max(fd_err, std::abs((detect::logistic_loss(data, wp, b, l2) - detect::logistic_loss(data, wm, b, l2)) / (2 * h) - gw[d]));
    }
    // Separable data.
    detect::TrainingSet sep;
    sep.dim = 8;
    std::vector<double> normal(8);
    for (double& v : normal) v = g(rng);
    for (int i = 0; i < 400; ++i) {
        std::vector<double> x(8);
        double dot = 0.0;
        for (int d = 0; d < 8; ++d) {
            x[d] = g(rng);
            dot += x[d] * normal[d];
        }
        for (int d = 0; d < 8; ++d) sep.x.push_back(x[d] + (dot >= 0 ? 0.3 : -0.3) * normal[d]);
        sep.y.push_back(dot >= 0);
        sep.sample_weight.push_back(1.0);
    }
    detect::TrainConfig cfg;
    cfg.l2 = 0.0;
    cfg.epochs = 500;
    const auto model = detect::fit_logistic(sep, cfg);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < sep.size(); ++i) correct += (model.probability(sep.row(i)) >= 0.5) == (sep.y[i] == 1);
    const double accuracy = static_cast<double>(correct) / static_cast<double>(sep.size());

    // Leave-one-clip-out on simulated impulse-train clips at 20 dB SNR.
    const auto profile = localize::chiseling_profile();
    const std::size_t n_clips = 6;
    std::vector<detect::LabeledClip> clips(n_clips);
    std::vector<detect::EventList> truth(n_clips);
    const dsp::SpectrogramConfig spec;
    for (std::size_t i = 0; i < n_clips; ++i) {
        const auto scene = cli::default_scene(profile, i, 6, 2.0, 20.0);
        const auto rec = sim::simulate_propagation(scene, sim::mix_seed(6, 100 + i));
        const auto mono = rec.mixdown();
        clips[i].id = "clip" + std::to_string(i);
        clips[i].audio = dsp::resample(mono, rec.sample_rate, 16000.0);
        std::vector<double> onsets;
        const auto& src = scene.sources.front();
        const double delay = sim::arrival_delay(scene, src);
        for (const auto& s : sim::source_event_spans(src, scene.duration)) clips[i].event_spans.push_back({s.start + delay, s.end + delay});
        for (double t : sim::source_event_times(src, scene.duration)) onsets.push_back(t + delay);
        truth[i] = detect::events_from_times(onsets, spec);
    }
    std::vector<std::size_t> fold_of(n_clips);
    std::iota(fold_of.begin(), fold_of.end(), 0);
    detect::AugmentationSpec aug;
    aug.seed = 6;
    detect::TrainConfig train;
    train.seed = 6;
    const auto models = detect::train_classifier(clips, fold_of, n_clips, aug, train, 1);
    std::size_t htp = 0, hfp = 0, hfn = 0, rtp = 0, rfp = 0, rfn = 0;
    for (std::size_t i = 0; i < n_clips; ++i) {
        const auto pred = detect::transitions_to_events(detect::predict_sequence(models[i], detect::extract_features(clips[i].audio, spec)));
        const auto hm = detect::match_events(pred, truth[i], detect::MatchConfig::hard());
        const auto rm = detect::match_events(pred, truth[i], detect::MatchConfig::relaxed(1));
        htp += hm.tp, hfp += hm.fp, hfn += hm.fn, rtp += rm.tp, rfp += rm.fp, rfn += rm.fn;
    }
    const double hard_f1 = detect::metrics_from_counts(htp, hfp, hfn).f1;
    const double relaxed_f1 = detect::metrics_from_counts(rtp, rfp, rfn).f1;
    const double t = seconds_since(t0);
    report(6, fd_err < 1e-6 && accuracy == 1.0 && relaxed_f1 == 1.0 && hard_f1 >= 0.8 && t < 120.0,
           fmt("gradient vs finite differences %.1e (< 1e-6); separable accuracy %.3f; leave-one-clip-out relaxed F1 %.3f "
               "(= 1), hard F1 %.3f (>= 0.8); %.0f s (< 120 s)",
               fd_err, accuracy, relaxed_f1, hard_f1, t));
}

void criterion7(const fs::path& root) {
    cli::Config config;
    config.profile = "chiseling";
    config.seed = 7;
    const cli::Workspace ws{root / "pipeline"};
    fs::remove_all(ws.root);
    const auto summary = cli::run_pipeline(config, ws, std::nullopt, std::nullopt, std::nullopt, 1);
    double at01 = -1.0;
    bool monotone = true;
    std::string table;
    for (std::size_t i = 0; i < summary.thresholds.size(); ++i) {
        if (std::abs(summary.thresholds[i] - 0.1) < 1e-12) at01 = summary.recall[i];
        if (i > 0 && summary.recall[i] > summary.recall[i - 1]) monotone = false;
        table += fmt(" %.2f:%.3f", summary.thresholds[i], summary.recall[i]);
    }
    const auto profile = localize::chiseling_profile();
    report(7, at01 >= 0.9 && monotone && summary.localizations > 0,
           fmt("chiseling pipeline, %zu clips, k=%d: recall@0.1 %.3f (>= 0.9), monotone %s, recall table%s, %zu "
               "localizations, relaxed F1 %.3f",
               profile.clips, profile.folds, at01, monotone ? "yes" : "NO", table.c_str(), summary.localizations,
               summary.relaxed_f1));
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SONOLOC_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        files[fs::relative(e.path(), root).string()] = s.str();
    }
    return files;
}

void criterion8(const fs::path& root) {
    const std::string common = " --profile chiseling --seed 8 --clips 3 --duration 1.5 --grid-nx 40 --grid-ny 40";
    const std::vector<std::string> stages{"train", "detect", "beamform", "fuse", "localize", "evaluate"};
    std::map<std::string, std::map<std::string, std::string>> runs;
    bool exit_ok = true;
    for (const auto& [name, jobs] : std::vector<std::pair<std::string, int>>{{"run1", 1}, {"run2", 1}, {"jobs8", 8}}) {
        const fs::path dir = root / ("determinism_" + name);
        fs::remove_all(dir);
        const std::string j = " --jobs " + std::to_string(jobs) + " --out " + dir.string();
        exit_ok &= run_cli("simulate" + common + j) == 0;
        for (const auto& s : stages) exit_ok &= run_cli(s + j) == 0;
        runs[name] = tree(dir);
    }
    const fs::path dir = root / "determinism_pipeline8";
    fs::remove_all(dir);
    exit_ok &= run_cli("pipeline" + common + " --jobs 8 --out " + dir.string()) == 0;
    runs["pipeline8"] = tree(dir);
    const bool twice = runs["run1"] == runs["run2"];
    const bool jobs = runs["run1"] == runs["jobs8"];
    const bool composed = runs["run1"] == runs["pipeline8"];
    report(8, exit_ok && twice && jobs && composed && !runs["run1"].empty(),
           fmt("%zu output files; two runs identical: %s; --jobs 1 vs --jobs 8 identical: %s; pipeline vs stages "
               "identical: %s",
               runs["run1"].size(), twice ? "yes" : "NO", jobs ? "yes" : "NO", composed ? "yes" : "NO"));
}

}  // namespace

int main() {
    const fs::path root = fs::temp_directory_path() / "sonoloc_acceptance";
    fs::create_directories(root);
    const std::vector<std::function<void()>> criteria{
        criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
        [&] { criterion7(root); }, [&] { criterion8(root); }};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
        }
    }
    fs::remove_all(root);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
