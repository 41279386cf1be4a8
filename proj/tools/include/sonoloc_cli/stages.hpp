#pragma once

#include "sonoloc/beamform/delay_and_sum.hpp"
#include "sonoloc/beamform/heatmap.hpp"
#include "sonoloc/detect/augment.hpp"
#include "sonoloc/detect/classifier.hpp"
#include "sonoloc/dsp/mel.hpp"
#include "sonoloc/localize/dbscan.hpp"
#include "sonoloc/localize/profile.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sonoloc::cli {

namespace fs = std::filesystem;

/// Bad or missing user input (exit code 1). Any other exception escaping a
/// stage is a pipeline failure (exit code 2).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Effective configuration of a workspace. simulate and pipeline write it to
/// <workspace>/config.json; later stages read it back so every stage of a
/// run sees the same values.
struct Config {
    std::string profile = "chiseling";
    std::uint64_t seed = 0;
    std::size_t clips = 0;  // 0: the profile's clip count
    double duration = 2.0;
    std::optional<double> snr_db = 20.0;
    dsp::SpectrogramConfig spectrogram;
    beamform::ScanGrid grid;
    beamform::DelayAndSumOptions das;
    localize::ClusterParams cluster;
    detect::TrainConfig train;
    detect::AugmentationSpec augment;
    std::vector<double> iou_thresholds{0.05, 0.1, 0.2, 0.4};
    double histogram_bin = 0.05;
    bool calibration_noise = true;

    localize::ActionProfile action() const;
    std::size_t clip_count() const;
    void validate() const;
};

nlohmann::json config_to_json(const Config& config);
Config config_from_json(const nlohmann::json& j);

/// Fixed layout below a workspace root.
struct Workspace {
    fs::path root;

    fs::path config() const { return root / "config.json"; }
    fs::path dataset() const { return root / "dataset.json"; }
    fs::path clip(const std::string& id) const { return root / "clips" / id; }
    fs::path models() const { return root / "models"; }
    fs::path detections(const std::string& id) const { return root / "detections" / id; }
    fs::path heatmaps(const std::string& id) const { return root / "heatmaps" / id; }
    fs::path fused(const std::string& id) const { return root / "fused" / id; }
    fs::path localizations(const std::string& id) const { return root / "localizations" / id; }
    fs::path reports() const { return root / "reports"; }
};

Config load_config(const Workspace& ws);
std::vector<std::string> load_clip_ids(const Workspace& ws);

/// Clip artifacts: scene.json, recording.wav, cloud.ply, events.jsonl,
/// acoustic_camera.json, rgbd_camera.json. Without `scene_file` the
/// profile's default scenes are generated (clip_00, clip_01, ...); with it,
/// that scene becomes the single clip "scene".
void run_simulate(const Config& config, const Workspace& ws, const std::optional<fs::path>& scene_file,
                  std::size_t jobs);

/// Clip-level k-fold split (models/folds.json) and one classifier per fold
/// (models/fold_<k>.json).
void run_train(const Workspace& ws, std::size_t jobs);

/// Per clip: probabilities.jsonl, pred_events.jsonl and triggers.jsonl, using
/// the model of the fold that held the clip out. `predictions_in` replaces
/// the classifier by external per-frame probabilities
/// ({clip_id, hop_frame, probability} records).
void run_detect(const Workspace& ws, const std::optional<fs::path>& predictions_in, std::size_t jobs);

/// One heatmap per trigger timestamp (heatmaps/<clip>/t<NNNN>.{bin,json}).
/// `heatmaps_in` skips beamforming and imports sidecars from
/// <heatmaps_in>/<clip>/ with the same names instead.
void run_beamform(const Workspace& ws, const std::optional<fs::path>& heatmaps_in, std::size_t jobs);

/// Weighted cloud per heatmap (fused/<clip>/t<NNNN>.ply).
void run_fuse(const Workspace& ws, std::size_t jobs);

/// localizations/<clip>/results.jsonl, one record per trigger in time order.
void run_localize(const Workspace& ws, std::size_t jobs);

struct EvaluationSummary {
    double relaxed_f1 = 0.0;
    double hard_f1 = 0.0;
    std::vector<double> thresholds;
    std::vector<double> recall;
    std::size_t localizations = 0;
    std::vector<std::string> warnings;
};

/// reports/detection_report.json, localization_report.json, iou_histogram.json.
/// `iou_thresholds` overrides the configured thresholds when non-empty.
EvaluationSummary run_evaluate(const Workspace& ws, const std::vector<double>& iou_thresholds);

/// simulate -> train -> detect -> beamform -> fuse -> localize -> evaluate,
/// writing exactly what the individual stages write.
EvaluationSummary run_pipeline(const Config& config, const Workspace& ws, const std::optional<fs::path>& scene_file,
                               const std::optional<fs::path>& predictions_in,
                               const std::optional<fs::path>& heatmaps_in, std::size_t jobs);

}  // namespace sonoloc::cli
