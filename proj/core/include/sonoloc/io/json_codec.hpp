#pragma once

#include "sonoloc/beamform/heatmap.hpp"
#include "sonoloc/detect/classifier.hpp"
#include "sonoloc/detect/evaluation.hpp"
#include "sonoloc/detect/events.hpp"
#include "sonoloc/dsp/mel.hpp"
#include "sonoloc/fusion/camera.hpp"
#include "sonoloc/localize/dbscan.hpp"
#include "sonoloc/localize/iou.hpp"
#include "sonoloc/localize/localize.hpp"
#include "sonoloc/localize/profile.hpp"
#include "sonoloc/sim/scene.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sonoloc::io {

using Json = nlohmann::json;

// Every *_from_json throws FormatError naming the offending key.

Json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const Json& j);

Json camera_to_json(const fusion::CameraModel& cam);
fusion::CameraModel camera_from_json(const Json& j);

Json scene_to_json(const sim::SyntheticScene& scene);
sim::SyntheticScene scene_from_json(const Json& j);

Json profile_to_json(const localize::ActionProfile& profile);

Json spectrogram_to_json(const dsp::SpectrogramConfig& config);
dsp::SpectrogramConfig spectrogram_from_json(const Json& j);

Json grid_to_json(const beamform::ScanGrid& grid);
beamform::ScanGrid grid_from_json(const Json& j);

Json cluster_params_to_json(const localize::ClusterParams& params);

Json aabb_to_json(const Aabb3& box);
Aabb3 aabb_from_json(const Json& j);
Json obox_to_json(const OrientedBox3& box);
OrientedBox3 obox_from_json(const Json& j);

Json model_to_json(const detect::ClassifierModel& model);
detect::ClassifierModel model_from_json(const Json& j);

/// {clip_id, time_s, hop_frame, video_frame}
Json event_to_json(const std::string& clip_id, const detect::Event& event);
detect::Event event_from_json(const Json& j);

Json match_to_json(const detect::MatchResult& r);
Json metrics_to_json(const detect::DetectionMetrics& m);

/// {timestamp, predicted_box, gt_box, iou, cluster_weight}
Json localization_to_json(const localize::LocalizationResult& r);
localize::LocalizationResult localization_from_json(const Json& j);

Json recall_to_json(const localize::RecallTable& t);
Json histogram_to_json(const localize::Histogram& h);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline, written atomically.
void write_json_file(const std::filesystem::path& path, const Json& j);

std::vector<Json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& records);

}  // namespace sonoloc::io
