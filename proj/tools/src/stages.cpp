#include "sonoloc_cli/stages.hpp"

#include "sonoloc/beamform/steering.hpp"
#include "sonoloc/detect/evaluation.hpp"
#include "sonoloc/detect/events.hpp"
#include "sonoloc/detect/features.hpp"
#include "sonoloc/dsp/bandpass.hpp"
#include "sonoloc/dsp/resample.hpp"
#include "sonoloc/errors.hpp"
#include "sonoloc/fusion/fuse.hpp"
#include "sonoloc/io/atomic_file.hpp"
#include "sonoloc/io/heatmap_io.hpp"
#include "sonoloc/io/json_codec.hpp"
#include "sonoloc/io/ply.hpp"
#include "sonoloc/io/wav.hpp"
#include "sonoloc/localize/iou.hpp"
#include "sonoloc/localize/localize.hpp"
#include "sonoloc/parallel.hpp"
#include "sonoloc/sim/point_cloud.hpp"
#include "sonoloc/sim/propagation.hpp"
#include "sonoloc_cli/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <array>

namespace sonoloc::cli {

using io::Json;

namespace {

constexpr double kDetectionRate = 16000.0;

// Reads an input file, turning format problems into InputError.
template <typename F>
auto load(const fs::path& path, F&& reader) {
    if (!fs::exists(path)) throw InputError("missing input file: " + path.string());
    try {
        return reader(path);
    } catch (const FormatError& e) {
        throw InputError(e.what());
    }
}

Json load_json(const fs::path& path) {
    return load(path, [](const fs::path& p) { return io::read_json_file(p); });
}

std::vector<Json> load_jsonl(const fs::path& path) {
    return load(path, [](const fs::path& p) { return io::read_jsonl(p); });
}

sim::SyntheticScene load_scene(const fs::path& path) {
    return load(path, [](const fs::path& p) { return io::scene_from_json(io::read_json_file(p)); });
}

std::string trigger_stem(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "t%04zu", index);
    return buf;
}

std::string clip_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "clip_%02zu", index);
    return buf;
}

// Emission times and spans shifted to arrival at the array origin, all sources merged.
std::vector<double> arrival_times(const sim::SyntheticScene& scene) {
    std::vector<double> times;
    for (const auto& s : scene.sources) {
        const double delay = sim::arrival_delay(scene, s);
        for (double t : sim::source_event_times(s, scene.duration)) times.push_back(t + delay);
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

std::vector<sim::Interval> arrival_spans(const sim::SyntheticScene& scene) {
    std::vector<sim::Interval> spans;
    for (const auto& s : scene.sources) {
        const double delay = sim::arrival_delay(scene, s);
        for (const auto& iv : sim::source_event_spans(s, scene.duration)) spans.push_back({iv.start + delay, iv.end + delay});
    }
    std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
    return spans;
}

// Ground truth for a localization at `time`: the source whose most recent
// event (at the array) precedes it, or the first source.
OrientedBox3 gt_box_at(const sim::SyntheticScene& scene, const localize::ActionProfile& profile, double time) {
    if (scene.sources.empty()) throw InputError("scene has no sources to evaluate against");
    std::size_t best = 0;
    double best_time = -1e300;
    for (std::size_t i = 0; i < scene.sources.size(); ++i) {
        const auto& s = scene.sources[i];
        const double delay = sim::arrival_delay(scene, s);
        for (double t : sim::source_event_times(s, scene.duration)) {
            if (t + delay <= time + 0.05 && t + delay > best_time) {
                best_time = t + delay;
                best = i;
            }
        }
    }
    return sim::ground_truth_box(scene.sources[best], profile);
}

std::vector<double> detection_audio(const MultichannelRecording& rec) {
    const std::vector<double> mono = rec.mixdown();
    return dsp::resample(mono, rec.sample_rate, kDetectionRate);
}

std::vector<double> load_triggers(const Workspace& ws, const std::string& id) {
    std::vector<double> times;
    for (const Json& r : load_jsonl(ws.detections(id) / "triggers.jsonl")) times.push_back(r.at("time_s").get<double>());
    return times;
}

detect::EventList load_events(const fs::path& path) {
    detect::EventList list;
    try {
        for (const Json& r : load_jsonl(path)) list.events.push_back(io::event_from_json(r));
        list.validate();
    } catch (const std::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    return list;
}

void prepare_dir(const fs::path& dir) {
    fs::create_directories(dir);
}

}  // namespace

Config load_config(const Workspace& ws) { return config_from_json(load_json(ws.config())); }

std::vector<std::string> load_clip_ids(const Workspace& ws) {
    const Json j = load_json(ws.dataset());
    try {
        return j.at("clips").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(ws.dataset().string() + ": " + e.what());
    }
}

void run_simulate(const Config& requested, const Workspace& ws, const std::optional<fs::path>& scene_file,
                  std::size_t jobs) {
    requested.validate();
    const localize::ActionProfile profile = requested.action();
    std::vector<sim::SyntheticScene> scenes;
    std::vector<std::string> ids;
    Config config = requested;
    if (scene_file) {
        scenes.push_back(load_scene(*scene_file));
        ids.push_back("scene");
        config.clips = 1;
        config.duration = scenes.front().duration;
    } else {
        for (std::size_t i = 0; i < config.clip_count(); ++i) {
            scenes.push_back(default_scene(profile, i, config.seed, config.duration, config.snr_db));
            ids.push_back(clip_name(i));
        }
    }

    io::OutputSet outputs;
    io::write_json_file(outputs.add(ws.config()), config_to_json(config));
    const Config effective = load_config(ws);
    io::write_json_file(outputs.add(ws.dataset()), Json{{"profile", profile.name}, {"clips", ids}});

    std::vector<std::vector<fs::path>> written(scenes.size());
    parallel_for(scenes.size(), jobs, [&](std::size_t i) {
        const sim::SyntheticScene& scene = scenes[i];
        const fs::path dir = ws.clip(ids[i]);
        auto& files = written[i];
        auto track = [&](const std::string& name) { return files.emplace_back(dir / name); };
        io::write_json_file(track("scene.json"), io::scene_to_json(scene));
        io::write_json_file(track("acoustic_camera.json"), io::camera_to_json(sim::acoustic_camera(scene)));
        io::write_json_file(track("rgbd_camera.json"), io::camera_to_json(scene.camera));
        const MultichannelRecording rec = sim::simulate_propagation(scene, sim::mix_seed(effective.seed, 100 + i));
        io::write_wav(track("recording.wav"), rec);
        io::write_ply(track("cloud.ply"), sim::synth_point_cloud(scene, sim::mix_seed(effective.seed, 200 + i)));
        std::vector<Json> events;
        const std::vector<double> times = arrival_times(scene);
        for (const detect::Event& e : detect::events_from_times(times, effective.spectrogram).events) {
            events.push_back(io::event_to_json(ids[i], e));
        }
        io::write_jsonl(track("events.jsonl"), events);
    });
    for (const auto& files : written)
        for (const auto& f : files) outputs.add(f);
    outputs.commit();
}

void run_train(const Workspace& ws, std::size_t jobs) {
    const Config config = load_config(ws);
    const std::vector<std::string> ids = load_clip_ids(ws);
    const localize::ActionProfile profile = config.action();
    const std::size_t folds = std::min<std::size_t>(static_cast<std::size_t>(profile.folds), ids.size());
    if (folds == 0) throw InputError("dataset has no clips");

    std::vector<detect::LabeledClip> clips(ids.size());
    parallel_for(ids.size(), jobs, [&](std::size_t i) {
        const sim::SyntheticScene scene = load_scene(ws.clip(ids[i]) / "scene.json");
        const MultichannelRecording rec =
            load(ws.clip(ids[i]) / "recording.wav", [](const fs::path& p) { return io::read_wav(p); });
        clips[i] = {ids[i], detection_audio(rec), arrival_spans(scene)};
    });
    const std::vector<std::size_t> fold_of = detect::kfold_split(ids.size(), folds, config.seed);
    const std::vector<detect::ClassifierModel> models =
        detect::train_classifier(clips, fold_of, folds, config.augment, config.train, jobs);

    io::OutputSet outputs;
    Json assignment = Json::object();
    for (std::size_t i = 0; i < ids.size(); ++i) assignment[ids[i]] = fold_of[i];
    io::write_json_file(outputs.add(ws.models() / "folds.json"), Json{{"folds", folds}, {"assignment", assignment}});
    for (std::size_t f = 0; f < models.size(); ++f) {
        if (models[f].degenerate_labels) {
            std::cerr << "warning: fold " << f << " has single-class labels; using the energy-threshold fallback\n";
        }
        io::write_json_file(outputs.add(ws.models() / ("fold_" + std::to_string(f) + ".json")), io::model_to_json(models[f]));
    }
    outputs.commit();
}

void run_detect(const Workspace& ws, const std::optional<fs::path>& predictions_in, std::size_t jobs) {
    const Config config = load_config(ws);
    const std::vector<std::string> ids = load_clip_ids(ws);
    const localize::ActionProfile profile = config.action();
    const dsp::SpectrogramConfig& spec = config.spectrogram;

    std::map<std::string, std::map<std::int64_t, double>> external;
    std::vector<detect::ClassifierModel> models;
    Json assignment;
    if (predictions_in) {
        for (const Json& r : load_jsonl(*predictions_in)) {
            try {
                external[r.at("clip_id").get<std::string>()][r.at("hop_frame").get<std::int64_t>()] =
                    r.at("probability").get<double>();
            } catch (const nlohmann::json::exception& e) {
                throw InputError(predictions_in->string() + ": " + e.what());
            }
        }
    } else {
        const Json folds = load_json(ws.models() / "folds.json");
        assignment = folds.at("assignment");
        const auto k = folds.at("folds").get<std::size_t>();
        for (std::size_t f = 0; f < k; ++f) {
            const fs::path p = ws.models() / ("fold_" + std::to_string(f) + ".json");
            models.push_back(load(p, [](const fs::path& q) { return io::model_from_json(io::read_json_file(q)); }));
        }
    }

    struct ClipOutput {
        std::vector<Json> probabilities, events, triggers;
    };
    std::vector<ClipOutput> out(ids.size());
    parallel_for(ids.size(), jobs, [&](std::size_t i) {
        const std::string& id = ids[i];
        const MultichannelRecording rec =
            load(ws.clip(id) / "recording.wav", [](const fs::path& p) { return io::read_wav(p); });
        const std::vector<double> audio = detection_audio(rec);
        const std::size_t frames = spec.frame_count(audio.size());
        std::vector<double> probs(frames);
        if (predictions_in) {
            const auto it = external.find(id);
            if (it == external.end()) throw InputError("no imported predictions for clip " + id);
            for (std::size_t k = 0; k < frames; ++k) {
                const auto f = it->second.find(static_cast<std::int64_t>(k));
                if (f == it->second.end()) {
                    throw InputError("imported predictions for clip " + id + " lack hop frame " + std::to_string(k));
                }
                probs[k] = f->second;
            }
        } else {
            if (!assignment.contains(id)) throw InputError("clip " + id + " has no fold assignment");
            const detect::ClassifierModel& model = models.at(assignment.at(id).get<std::size_t>());
            const detect::FeatureSequence features = detect::extract_features(audio, spec);
            for (std::size_t k = 0; k < frames; ++k) probs[k] = model.probability(features.frame(k));
        }
        const detect::PredictionSequence pred = detect::threshold_probabilities(
            probs, config.train.decision_threshold, spec.hop_len, detect::frame_origin_time(spec));
        const detect::EventList events = detect::transitions_to_events(pred);
        // Triggers must leave room for a full analysis window before the clip ends.
        const double clip_end = rec.duration() - 1.0 / beamform::kVideoFrameRate;
        std::vector<double> triggers;
        for (double t : detect::trigger_schedule(events, profile, clip_end)) {
            if (t >= 0.0 && t <= clip_end + 1e-9) triggers.push_back(t);
        }
        ClipOutput& o = out[i];
        for (std::size_t k = 0; k < frames; ++k) {
            o.probabilities.push_back({{"clip_id", id}, {"hop_frame", k}, {"probability", probs[k]}});
        }
        for (const auto& e : events.events) o.events.push_back(io::event_to_json(id, e));
        for (std::size_t n = 0; n < triggers.size(); ++n) {
            o.triggers.push_back({{"clip_id", id},
                                  {"index", n},
                                  {"time_s", triggers[n]},
                                  {"video_frame", beamform::video_frame_at(triggers[n])}});
        }
    });
    io::OutputSet outputs;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const fs::path dir = ws.detections(ids[i]);
        io::write_jsonl(outputs.add(dir / "probabilities.jsonl"), out[i].probabilities);
        io::write_jsonl(outputs.add(dir / "pred_events.jsonl"), out[i].events);
        io::write_jsonl(outputs.add(dir / "triggers.jsonl"), out[i].triggers);
    }
    outputs.commit();
}

void run_beamform(const Workspace& ws, const std::optional<fs::path>& heatmaps_in, std::size_t jobs) {
    const Config config = load_config(ws);
    const std::vector<std::string> ids = load_clip_ids(ws);
    const localize::ActionProfile profile = config.action();
    io::OutputSet outputs;
    for (const std::string& id : ids) {
        const std::vector<double> triggers = load_triggers(ws, id);
        const fs::path dir = ws.heatmaps(id);
        prepare_dir(dir);
        std::vector<beamform::AcousticHeatmap> maps(triggers.size());
        if (heatmaps_in) {
            for (std::size_t n = 0; n < triggers.size(); ++n) {
                fs::path side = *heatmaps_in / id / (trigger_stem(n) + ".json");
                beamform::AcousticHeatmap h = load(side, [](const fs::path& p) { return io::read_heatmap(p); });
                maps[n] = io::quantize_heatmap(h.normalized ? h : beamform::normalize_heatmap(h));
            }
        } else if (!triggers.empty()) {
            const sim::SyntheticScene scene = load_scene(ws.clip(id) / "scene.json");
            MultichannelRecording rec =
                load(ws.clip(id) / "recording.wav", [](const fs::path& p) { return io::read_wav(p); });
            if (profile.band) {
                parallel_for(rec.channel_count(), jobs, [&](std::size_t m) {
                    std::vector<double> x(rec.channels[m].begin(), rec.channels[m].end());
                    const std::vector<double> y = dsp::bandpass(x, *profile.band, rec.sample_rate);
                    std::transform(y.begin(), y.end(), rec.channels[m].begin(), [](double v) { return static_cast<float>(v); });
                });
            }
            const beamform::SteeringTable steering =
                beamform::compute_steering(scene.array, config.grid, scene.speed_of_sound);
            for (std::size_t n = 0; n < triggers.size(); ++n) {
                const beamform::AcousticHeatmap raw =
                    beamform::delay_and_sum(rec, steering, beamform::video_frame_window(triggers[n]), config.das, jobs);
                maps[n] = io::quantize_heatmap(beamform::normalize_heatmap(raw));
            }
        }
        for (std::size_t n = 0; n < triggers.size(); ++n) {
            const fs::path stem = dir / trigger_stem(n);
            outputs.add(fs::path(stem).concat(".bin"));
            outputs.add(io::write_heatmap(stem, maps[n]));
        }
    }
    outputs.commit();
}

void run_fuse(const Workspace& ws, std::size_t jobs) {
    const Config config = load_config(ws);
    const std::vector<std::string> ids = load_clip_ids(ws);
    io::OutputSet outputs;
    for (std::size_t c = 0; c < ids.size(); ++c) {
        const std::string& id = ids[c];
        const std::size_t count = load_triggers(ws, id).size();
        const fs::path dir = ws.fused(id);
        prepare_dir(dir);
        if (count == 0) continue;
        const fusion::PointCloud cloud = load(ws.clip(id) / "cloud.ply", [](const fs::path& p) { return io::read_ply(p); });
        const fusion::CameraModel cam = load(ws.clip(id) / "acoustic_camera.json",
                                             [](const fs::path& p) { return io::camera_from_json(io::read_json_file(p)); });
        std::vector<fs::path> files(count);
        parallel_for(count, jobs, [&](std::size_t n) {
            const beamform::AcousticHeatmap h = load(ws.heatmaps(id) / (trigger_stem(n) + ".json"),
                                                     [](const fs::path& p) { return io::read_heatmap(p); });
            std::optional<fusion::CalibrationNoise> noise;
            if (config.calibration_noise) {
                noise = fusion::kAcousticCameraNoise;
                noise->seed = sim::mix_seed(config.seed, (static_cast<std::uint64_t>(c) << 20) + n);
            }
            files[n] = dir / (trigger_stem(n) + ".ply");
            io::write_weighted_ply(files[n], fusion::fuse(cloud, h, cam, noise));
        });
        for (const auto& f : files) outputs.add(f);
    }
    outputs.commit();
}

void run_localize(const Workspace& ws, std::size_t jobs) {
    const Config config = load_config(ws);
    const std::vector<std::string> ids = load_clip_ids(ws);
    const localize::ActionProfile profile = config.action();
    io::OutputSet outputs;
    for (const std::string& id : ids) {
        const std::vector<double> triggers = load_triggers(ws, id);
        const sim::SyntheticScene scene = load_scene(ws.clip(id) / "scene.json");
        std::vector<Json> records(triggers.size());
        parallel_for(triggers.size(), jobs, [&](std::size_t n) {
            const fusion::WeightedPointCloud cloud = load(ws.fused(id) / (trigger_stem(n) + ".ply"),
                                                          [](const fs::path& p) { return io::read_weighted_ply(p); });
            const localize::LocalizationResult r = localize::localize_event(
                cloud, profile, config.cluster, gt_box_at(scene, profile, triggers[n]), triggers[n]);
            records[n] = io::localization_to_json(r);
        });
        io::write_jsonl(outputs.add(ws.localizations(id) / "results.jsonl"), records);
    }
    outputs.commit();
}

EvaluationSummary run_evaluate(const Workspace& ws, const std::vector<double>& iou_thresholds) {
    const Config config = load_config(ws);
    const std::vector<std::string> ids = load_clip_ids(ws);
    const localize::ActionProfile profile = config.action();
    const Json folds = load_json(ws.models() / "folds.json");
    EvaluationSummary summary;

    // Detection: counts pooled over the clips of each fold.
    const auto k = folds.at("folds").get<std::size_t>();
    std::vector<std::array<std::size_t, 3>> hard(k, {0, 0, 0}), relaxed(k, {0, 0, 0});
    Json per_clip = Json::array();
    std::size_t predicted_total = 0;
    for (const std::string& id : ids) {
        const detect::EventList gt = load_events(ws.clip(id) / "events.jsonl");
        const detect::EventList pred = load_events(ws.detections(id) / "pred_events.jsonl");
        predicted_total += pred.size();
        const auto f = folds.at("assignment").at(id).get<std::size_t>();
        const detect::MatchResult h = detect::match_events(pred, gt, detect::MatchConfig::hard());
        const detect::MatchResult r = detect::match_events(pred, gt, detect::MatchConfig::relaxed(profile.j));
        hard[f] = {hard[f][0] + h.tp, hard[f][1] + h.fp, hard[f][2] + h.fn};
        relaxed[f] = {relaxed[f][0] + r.tp, relaxed[f][1] + r.fp, relaxed[f][2] + r.fn};
        per_clip.push_back({{"clip_id", id}, {"fold", f}, {"hard", io::match_to_json(h)}, {"relaxed", io::match_to_json(r)}});
    }
    std::vector<detect::MatchResult> hard_folds, relaxed_folds;
    for (std::size_t f = 0; f < k; ++f) {
        hard_folds.push_back(detect::metrics_from_counts(hard[f][0], hard[f][1], hard[f][2]));
        relaxed_folds.push_back(detect::metrics_from_counts(relaxed[f][0], relaxed[f][1], relaxed[f][2]));
    }
    const detect::DetectionMetrics hard_m = detect::aggregate_metrics(hard_folds);
    const detect::DetectionMetrics relaxed_m = detect::aggregate_metrics(relaxed_folds);
    summary.hard_f1 = hard_m.f1.mean;
    summary.relaxed_f1 = relaxed_m.f1.mean;
    if (predicted_total == 0) summary.warnings.push_back("no predicted events: detection metrics are zero");

    // Localization over every triggered timestamp, clip order then time order.
    std::vector<double> ious;
    for (const std::string& id : ids) {
        for (const Json& r : load_jsonl(ws.localizations(id) / "results.jsonl")) {
            try {
                ious.push_back(io::localization_from_json(r).iou);
            } catch (const FormatError& e) {
                throw InputError(e.what());
            }
        }
    }
    const std::vector<double>& thresholds = iou_thresholds.empty() ? config.iou_thresholds : iou_thresholds;
    const localize::RecallTable table = localize::recall_table(ious, thresholds);
    const localize::Histogram hist = localize::iou_histogram(ious, config.histogram_bin);
    if (table.undefined) summary.warnings.push_back("no localizations: recall is undefined and reported as 0");
    summary.thresholds = table.thresholds;
    summary.recall = table.recall;
    summary.localizations = ious.size();

    io::OutputSet outputs;
    io::write_json_file(outputs.add(ws.reports() / "detection_report.json"),
                        Json{{"profile", profile.name},
                             {"folds", k},
                             {"j", profile.j},
                             {"hard", io::metrics_to_json(hard_m)},
                             {"relaxed", io::metrics_to_json(relaxed_m)},
                             {"clips", per_clip},
                             {"warnings", summary.warnings}});
    Json loc = io::recall_to_json(table);
    loc["profile"] = profile.name;
    loc["localizations"] = ious.size();
    loc["mean_iou"] = ious.empty() ? 0.0 : std::accumulate(ious.begin(), ious.end(), 0.0) / static_cast<double>(ious.size());
    io::write_json_file(outputs.add(ws.reports() / "localization_report.json"), loc);
    io::write_json_file(outputs.add(ws.reports() / "iou_histogram.json"), io::histogram_to_json(hist));
    outputs.commit();
    for (const std::string& w : summary.warnings) std::cerr << "warning: " << w << "\n";
    return summary;
}

EvaluationSummary run_pipeline(const Config& config, const Workspace& ws, const std::optional<fs::path>& scene_file,
                               const std::optional<fs::path>& predictions_in,
                               const std::optional<fs::path>& heatmaps_in, std::size_t jobs) {
    run_simulate(config, ws, scene_file, jobs);
    if (!predictions_in) run_train(ws, jobs);
    run_detect(ws, predictions_in, jobs);
    run_beamform(ws, heatmaps_in, jobs);
    run_fuse(ws, jobs);
    run_localize(ws, jobs);
    return run_evaluate(ws, {});
}

}  // namespace sonoloc::cli
