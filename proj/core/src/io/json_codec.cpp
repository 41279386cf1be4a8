#include "sonoloc/io/json_codec.hpp"

#include "sonoloc/errors.hpp"
#include "sonoloc/io/atomic_file.hpp"

#include <fstream>
#include <sstream>

namespace sonoloc::io {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) throw FormatError(std::string("expected an object holding '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) throw FormatError(std::string("missing key '") + key + "'");
    return *it;
}

template <typename T>
T get(const Json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string("bad value for '") + key + "'");
    }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
    return get<T>(j, key);
}

std::vector<double> numbers(const Json& j, std::size_t n, const char* what) {
    std::vector<double> v;
    try {
        v = j.get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string(what) + ": expected a numeric array");
    }
    if (n && v.size() != n) throw FormatError(std::string(what) + ": expected " + std::to_string(n) + " values");
    return v;
}

Json mat3_to_json(const Mat3& m) {
    Json a = Json::array();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
    return a;
}

Mat3 mat3_from_json(const Json& j, const char* what) {
    const auto v = numbers(j, 9, what);
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = v[r * 3 + c];
    if (!is_rotation(m, 1e-6)) throw FormatError(std::string(what) + ": not a rotation matrix");
    return m;
}

Json pose_to_json(const Rigid3& t) {
    const auto v = rigid_to_row_major(t);
    return Json(std::vector<double>(v.begin(), v.end()));
}

Rigid3 pose_from_json(const Json& j, const char* what) {
    const auto v = numbers(j, 16, what);
    try {
        return rigid_from_row_major(v);
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

Json waveform_to_json(const sim::WaveformKind& w) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, sim::ImpulseTrain>) {
                return {{"kind", "impulse_train"}, {"period", v.period}, {"decay", v.decay}, {"lo_hz", v.lo_hz},
                        {"hi_hz", v.hi_hz}};
            } else if constexpr (std::is_same_v<T, sim::BandLimitedNoise>) {
                return {{"kind", "band_noise"}, {"lo_hz", v.lo_hz}, {"hi_hz", v.hi_hz}};
            } else if constexpr (std::is_same_v<T, sim::Tone>) {
                return {{"kind", "tone"}, {"freq_hz", v.freq_hz}};
            } else {
                return {{"kind", "custom"}, {"samples", v.samples}};
            }
        },
        w);
}

sim::WaveformKind waveform_from_json(const Json& j) {
    const auto kind = get<std::string>(j, "kind");
    if (kind == "impulse_train") {
        sim::ImpulseTrain t;
        t.period = get_or(j, "period", t.period);
        t.decay = get_or(j, "decay", t.decay);
        t.lo_hz = get_or(j, "lo_hz", t.lo_hz);
        t.hi_hz = get_or(j, "hi_hz", t.hi_hz);
        return t;
    }
    if (kind == "band_noise") {
        sim::BandLimitedNoise n;
        n.lo_hz = get_or(j, "lo_hz", n.lo_hz);
        n.hi_hz = get_or(j, "hi_hz", n.hi_hz);
        return n;
    }
    if (kind == "tone") return sim::Tone{get<double>(j, "freq_hz")};
    if (kind == "custom") return sim::CustomWaveform{numbers(field(j, "samples"), 0, "samples")};
    throw FormatError("unknown waveform kind '" + kind + "'");
}

Json intervals_to_json(const std::vector<sim::Interval>& ivs) {
    Json a = Json::array();
    for (const auto& iv : ivs) a.push_back({iv.start, iv.end});
    return a;
}

std::vector<sim::Interval> intervals_from_json(const Json& j) {
    std::vector<sim::Interval> out;
    if (!j.is_array()) throw FormatError("active_intervals: expected an array");
    for (const Json& e : j) {
        const auto v = numbers(e, 2, "active_intervals");
        out.push_back({v[0], v[1]});
    }
    return out;
}

}  // namespace

Json vec3_to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const Json& j) {
    const auto v = numbers(j, 3, "vector");
    return {v[0], v[1], v[2]};
}

Json camera_to_json(const fusion::CameraModel& cam) {
    return {{"fx", cam.fx},       {"fy", cam.fy},         {"cx", cam.cx},
            {"cy", cam.cy},       {"width", cam.width},   {"height", cam.height},
            {"pose", pose_to_json(cam.pose)}};
}

fusion::CameraModel camera_from_json(const Json& j) {
    fusion::CameraModel cam;
    cam.fx = get<double>(j, "fx");
    cam.fy = get<double>(j, "fy");
    cam.cx = get<double>(j, "cx");
    cam.cy = get<double>(j, "cy");
    cam.width = get<int>(j, "width");
    cam.height = get<int>(j, "height");
    if (j.contains("pose")) cam.pose = pose_from_json(j.at("pose"), "pose");
    try {
        cam.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("camera: ") + e.what());
    }
    return cam;
}

Json scene_to_json(const sim::SyntheticScene& scene) {
    Json mics = Json::array();
    for (const Vec3& p : scene.array.positions) mics.push_back(vec3_to_json(p));
    Json sources = Json::array();
    for (const auto& s : scene.sources) {
        sources.push_back({{"position", vec3_to_json(s.position)},
                           {"amplitude", s.amplitude},
                           {"waveform", waveform_to_json(s.waveform)},
                           {"onsets", s.onsets},
                           {"active_intervals", intervals_to_json(s.active_intervals)},
                           {"orientation", mat3_to_json(s.orientation)}});
    }
    Json prims = Json::array();
    for (const auto& p : scene.primitives) {
        if (const auto* sp = std::get_if<sim::Sphere>(&p.shape)) {
            prims.push_back({{"kind", "sphere"}, {"center", vec3_to_json(sp->center)}, {"radius", sp->radius},
                             {"density", p.density}});
        } else {
            const auto& b = std::get<sim::Box>(p.shape);
            prims.push_back({{"kind", "box"},
                             {"center", vec3_to_json(b.center)},
                             {"half_extents", vec3_to_json(b.half_extents)},
                             {"rotation", mat3_to_json(b.rotation)},
                             {"density", p.density}});
        }
    }
    Json acoustic = camera_to_json(scene.acoustic_intrinsics);
    acoustic.erase("pose");
    return {{"duration", scene.duration},
            {"speed_of_sound", scene.speed_of_sound},
            {"snr_db", scene.snr_db ? Json(*scene.snr_db) : Json(nullptr)},
            {"array", {{"sample_rate", scene.array.sample_rate}, {"positions", mics}}},
            {"array_pose", pose_to_json(scene.array_pose)},
            {"camera", camera_to_json(scene.camera)},
            {"acoustic_camera", acoustic},
            {"sources", sources},
            {"primitives", prims}};
}

sim::SyntheticScene scene_from_json(const Json& j) {
    sim::SyntheticScene scene;
    scene.duration = get_or(j, "duration", scene.duration);
    scene.speed_of_sound = get_or(j, "speed_of_sound", scene.speed_of_sound);
    if (j.contains("snr_db")) {
        scene.snr_db = j.at("snr_db").is_null() ? std::nullopt : std::optional<double>(get<double>(j, "snr_db"));
    }
    const Json& arr = field(j, "array");
    const double rate = get_or(arr, "sample_rate", sim::kArraySampleRate);
    if (arr.contains("positions")) {
        scene.array.sample_rate = rate;
        for (const Json& p : field(arr, "positions")) scene.array.positions.push_back(vec3_from_json(p));
    } else if (arr.contains("ring")) {
        const Json& ring = field(arr, "ring");
        scene.array = sim::make_ring_array(get_or<std::size_t>(ring, "mics", sim::kRingMics),
                                           get_or(ring, "radius", sim::kRingRadius), rate);
    } else {
        throw FormatError("array: need 'positions' or 'ring'");
    }
    if (j.contains("array_pose")) scene.array_pose = pose_from_json(j.at("array_pose"), "array_pose");
    if (j.contains("camera")) scene.camera = camera_from_json(j.at("camera"));
    if (j.contains("acoustic_camera")) {
        Json a = j.at("acoustic_camera");
        a.erase("pose");
        scene.acoustic_intrinsics = camera_from_json(a);
    }
    for (const Json& s : get_or(j, "sources", Json::array())) {
        sim::SourceSpec src;
        src.position = vec3_from_json(field(s, "position"));
        src.amplitude = get_or(s, "amplitude", src.amplitude);
        if (s.contains("waveform")) src.waveform = waveform_from_json(s.at("waveform"));
        if (s.contains("onsets")) src.onsets = numbers(s.at("onsets"), 0, "onsets");
        if (s.contains("active_intervals")) src.active_intervals = intervals_from_json(s.at("active_intervals"));
        if (s.contains("orientation")) src.orientation = mat3_from_json(s.at("orientation"), "orientation");
        scene.sources.push_back(std::move(src));
    }
    for (const Json& p : get_or(j, "primitives", Json::array())) {
        sim::ScenePrimitive prim;
        prim.density = get_or(p, "density", prim.density);
        const auto kind = get<std::string>(p, "kind");
        if (kind == "sphere") {
            prim.shape = sim::Sphere{vec3_from_json(field(p, "center")), get<double>(p, "radius")};
        } else if (kind == "box") {
            sim::Box b;
            b.center = vec3_from_json(field(p, "center"));
            b.half_extents = vec3_from_json(field(p, "half_extents"));
            if (p.contains("rotation")) b.rotation = mat3_from_json(p.at("rotation"), "rotation");
            prim.shape = b;
        } else {
            throw FormatError("unknown primitive kind '" + kind + "'");
        }
        scene.primitives.push_back(prim);
    }
    try {
        scene.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("scene: ") + e.what());
    }
    return scene;
}

Json profile_to_json(const localize::ActionProfile& p) {
    Json band = nullptr;
    if (p.band) band = {{"lo_hz", p.band->lo}, {"hi_hz", p.band->hi}, {"order", p.band->order}};
    Json rule;
    if (const auto* cube = std::get_if<localize::FixedCube>(&p.box_rule)) {
        rule = {{"kind", "fixed-cube"}, {"edge", cube->edge}};
    } else {
        rule = {{"kind", "instrument-extents"},
                {"extents", vec3_to_json(std::get<localize::InstrumentExtents>(p.box_rule).extents)}};
    }
    return {{"name", p.name},
            {"band", band},
            {"box_rule", rule},
            {"j", p.j},
            {"trigger_mode", std::string(localize::to_string(p.trigger_mode))},
            {"trigger_interval", p.trigger_interval},
            {"folds", p.folds},
            {"clips", p.clips}};
}

Json spectrogram_to_json(const dsp::SpectrogramConfig& c) {
    return {{"sample_rate", c.sample_rate}, {"window_len", c.window_len}, {"hop_len", c.hop_len},
            {"n_fft", c.fft_size()},        {"n_mels", c.n_mels},         {"mel_fmin", c.mel_fmin},
            {"mel_fmax", c.mel_fmax}};
}

dsp::SpectrogramConfig spectrogram_from_json(const Json& j) {
    dsp::SpectrogramConfig c;
    c.sample_rate = get_or(j, "sample_rate", c.sample_rate);
    c.window_len = get_or(j, "window_len", c.window_len);
    c.hop_len = get_or(j, "hop_len", c.hop_len);
    c.n_fft = get_or<std::size_t>(j, "n_fft", c.n_fft);
    c.n_mels = get_or<std::size_t>(j, "n_mels", c.n_mels);
    c.mel_fmin = get_or(j, "mel_fmin", c.mel_fmin);
    c.mel_fmax = get_or(j, "mel_fmax", c.mel_fmax);
    try {
        c.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("spectrogram config: ") + e.what());
    }
    return c;
}

Json grid_to_json(const beamform::ScanGrid& g) {
    return {{"distance", g.distance}, {"width", g.width}, {"height", g.height}, {"nx", g.nx}, {"ny", g.ny}};
}

beamform::ScanGrid grid_from_json(const Json& j) {
    beamform::ScanGrid g;
    g.distance = get<double>(j, "distance");
    g.width = get<double>(j, "width");
    g.height = get<double>(j, "height");
    g.nx = get<std::size_t>(j, "nx");
    g.ny = get<std::size_t>(j, "ny");
    try {
        g.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("scan grid: ") + e.what());
    }
    return g;
}

Json cluster_params_to_json(const localize::ClusterParams& p) {
    return {{"radius", p.radius}, {"min_weight", p.min_weight}};
}

Json aabb_to_json(const Aabb3& box) { return {{"min", vec3_to_json(box.min)}, {"max", vec3_to_json(box.max)}}; }

Aabb3 aabb_from_json(const Json& j) {
    Aabb3 b{vec3_from_json(field(j, "min")), vec3_from_json(field(j, "max"))};
    if (!b.valid()) throw FormatError("box: min exceeds max");
    return b;
}

Json obox_to_json(const OrientedBox3& box) {
    return {{"center", vec3_to_json(box.center)},
            {"half_extents", vec3_to_json(box.half_extents)},
            {"rotation", mat3_to_json(box.rotation)}};
}

OrientedBox3 obox_from_json(const Json& j) {
    OrientedBox3 b;
    b.center = vec3_from_json(field(j, "center"));
    b.half_extents = vec3_from_json(field(j, "half_extents"));
    b.rotation = mat3_from_json(field(j, "rotation"), "rotation");
    if (!b.valid()) throw FormatError("oriented box: invalid extents or rotation");
    return b;
}

Json model_to_json(const detect::ClassifierModel& m) {
    return {{"kind", std::string(detect::to_string(m.kind))},
            {"dim", m.dim},
            {"weights", m.weights},
            {"bias", m.bias},
            {"feature_mean", m.feature_mean},
            {"feature_scale", m.feature_scale},
            {"threshold", m.threshold},
            {"decision_threshold", m.decision_threshold},
            {"seed", m.seed},
            {"epochs", m.epochs},
            {"fold", m.fold},
            {"degenerate_labels", m.degenerate_labels}};
}

detect::ClassifierModel model_from_json(const Json& j) {
    detect::ClassifierModel m;
    try {
        m.kind = detect::classifier_kind_from_string(get<std::string>(j, "kind"));
    } catch (const InvalidArgument& e) {
        throw FormatError(e.what());
    }
    m.dim = get<std::size_t>(j, "dim");
    m.weights = get_or(j, "weights", std::vector<double>{});
    m.bias = get_or(j, "bias", 0.0);
    m.feature_mean = get_or(j, "feature_mean", std::vector<double>{});
    m.feature_scale = get_or(j, "feature_scale", std::vector<double>{});
    m.threshold = get_or(j, "threshold", 0.0);
    m.decision_threshold = get_or(j, "decision_threshold", 0.5);
    m.seed = get_or<std::uint64_t>(j, "seed", 0);
    m.epochs = get_or(j, "epochs", 0);
    m.fold = get_or(j, "fold", -1);
    m.degenerate_labels = get_or(j, "degenerate_labels", false);
    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("classifier model: ") + e.what());
    }
    return m;
}

Json event_to_json(const std::string& clip_id, const detect::Event& e) {
    return {{"clip_id", clip_id}, {"time_s", e.time}, {"hop_frame", e.hop_frame}, {"video_frame", e.video_frame}};
}

detect::Event event_from_json(const Json& j) {
    return {get<std::int64_t>(j, "hop_frame"), get<double>(j, "time_s"), get<std::int64_t>(j, "video_frame")};
}

Json match_to_json(const detect::MatchResult& r) {
    return {{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}};
}

Json metrics_to_json(const detect::DetectionMetrics& m) {
    auto ms = [](const detect::MeanStd& v) { return Json{{"mean", v.mean}, {"std", v.std}}; };
    Json folds = Json::array();
    for (const auto& f : m.folds) folds.push_back(match_to_json(f));
    return {{"precision", ms(m.precision)}, {"recall", ms(m.recall)}, {"f1", ms(m.f1)}, {"folds", folds}};
}

Json localization_to_json(const localize::LocalizationResult& r) {
    return {{"timestamp", r.timestamp},
            {"predicted_box", r.predicted ? aabb_to_json(*r.predicted) : Json(nullptr)},
            {"gt_box", obox_to_json(r.ground_truth)},
            {"iou", r.iou},
            {"cluster_weight", r.cluster_weight}};
}

localize::LocalizationResult localization_from_json(const Json& j) {
    localize::LocalizationResult r;
    r.timestamp = get<double>(j, "timestamp");
    const Json& p = field(j, "predicted_box");
    if (!p.is_null()) r.predicted = aabb_from_json(p);
    r.ground_truth = obox_from_json(field(j, "gt_box"));
    r.iou = get<double>(j, "iou");
    r.cluster_weight = get_or(j, "cluster_weight", 0.0);
    if (!(r.iou >= 0.0 && r.iou <= 1.0)) throw FormatError("iou outside [0, 1]");
    return r;
}

Json recall_to_json(const localize::RecallTable& t) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < t.thresholds.size(); ++i) {
        rows.push_back({{"threshold", t.thresholds[i]}, {"recall", t.recall[i]}});
    }
    return {{"recall", rows}, {"undefined", t.undefined}};
}

Json histogram_to_json(const localize::Histogram& h) {
    return {{"bin_width", h.bin_width}, {"edges", h.edges}, {"counts", h.counts}};
}

Json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

std::vector<Json> read_jsonl(const std::filesystem::path& path) {
    std::istringstream in(read_text_file(path));
    std::vector<Json> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(Json::parse(line));
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& records) {
    std::string text;
    for (const Json& r : records) text += r.dump() + "\n";
    write_file_atomic(path, text);
}

}  // namespace sonoloc::io
