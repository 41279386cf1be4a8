#include "sonoloc/errors.hpp"
#include "sonoloc/io/json_codec.hpp"
#include "sonoloc_cli/stages.hpp"

namespace sonoloc::cli {

using io::Json;

localize::ActionProfile Config::action() const {
    try {
        return localize::profile_by_name(profile);
    } catch (const InvalidArgument& e) {
        throw InputError(e.what());
    }
}

std::size_t Config::clip_count() const { return clips > 0 ? clips : action().clips; }

void Config::validate() const {
    try {
        const localize::ActionProfile a = action();
        a.validate();
        if (!(duration > 0.0)) throw InvalidArgument("duration must be positive");
        spectrogram.validate();
        grid.validate();
        das.validate();
        cluster.validate();
        train.validate();
        augment.validate();
        if (!(histogram_bin > 0.0 && histogram_bin <= 1.0)) throw InvalidArgument("histogram bin must lie in (0, 1]");
        for (double t : iou_thresholds) {
            if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("IoU thresholds must lie in [0, 1]");
        }
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("invalid configuration: ") + e.what());
    }
}

Json config_to_json(const Config& c) {
    return {{"profile", c.profile},
            {"seed", c.seed},
            {"clips", c.clip_count()},
            {"duration", c.duration},
            {"snr_db", c.snr_db ? Json(*c.snr_db) : Json(nullptr)},
            {"action", io::profile_to_json(c.action())},
            {"spectrogram", io::spectrogram_to_json(c.spectrogram)},
            {"grid", io::grid_to_json(c.grid)},
            {"beamform",
             {{"interp_taps", c.das.interp_taps},
              {"delay_resolution", c.das.delay_resolution},
              {"kaiser_beta", c.das.kaiser_beta}}},
            {"cluster", io::cluster_params_to_json(c.cluster)},
            {"train",
             {{"learning_rate", c.train.learning_rate},
              {"epochs", c.train.epochs},
              {"l2", c.train.l2},
              {"balance_classes", c.train.balance_classes},
              {"decision_threshold", c.train.decision_threshold}}},
            {"augment",
             {{"gain_db", {c.augment.gain_db.lo, c.augment.gain_db.hi}},
              {"noise_snr_db", {c.augment.noise_snr_db.lo, c.augment.noise_snr_db.hi}},
              {"clip_fraction", {c.augment.clip_fraction.lo, c.augment.clip_fraction.hi}},
              {"copies", c.augment.copies}}},
            {"iou_thresholds", c.iou_thresholds},
            {"histogram_bin", c.histogram_bin},
            {"calibration_noise", c.calibration_noise}};
}

Config config_from_json(const Json& j) {
    Config c;
    try {
        c.profile = j.at("profile").get<std::string>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.clips = j.at("clips").get<std::size_t>();
        c.duration = j.at("duration").get<double>();
        c.snr_db = j.at("snr_db").is_null() ? std::nullopt : std::optional<double>(j.at("snr_db").get<double>());
        c.spectrogram = io::spectrogram_from_json(j.at("spectrogram"));
        c.grid = io::grid_from_json(j.at("grid"));
        const Json& b = j.at("beamform");
        c.das.interp_taps = b.at("interp_taps").get<int>();
        c.das.delay_resolution = b.at("delay_resolution").get<int>();
        c.das.kaiser_beta = b.at("kaiser_beta").get<double>();
        c.cluster.radius = j.at("cluster").at("radius").get<double>();
        c.cluster.min_weight = j.at("cluster").at("min_weight").get<double>();
        const Json& t = j.at("train");
        c.train.spectrogram = c.spectrogram;
        c.train.learning_rate = t.at("learning_rate").get<double>();
        c.train.epochs = t.at("epochs").get<int>();
        c.train.l2 = t.at("l2").get<double>();
        c.train.balance_classes = t.at("balance_classes").get<bool>();
        c.train.decision_threshold = t.at("decision_threshold").get<double>();
        c.train.seed = c.seed;
        const Json& a = j.at("augment");
        auto range = [](const Json& r) { return detect::Range{r.at(0).get<double>(), r.at(1).get<double>()}; };
        c.augment.gain_db = range(a.at("gain_db"));
        c.augment.noise_snr_db = range(a.at("noise_snr_db"));
        c.augment.clip_fraction = range(a.at("clip_fraction"));
        c.augment.copies = a.at("copies").get<std::size_t>();
        c.augment.seed = c.seed;
        c.iou_thresholds = j.at("iou_thresholds").get<std::vector<double>>();
        c.histogram_bin = j.at("histogram_bin").get<double>();
        c.calibration_noise = j.at("calibration_noise").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed config: ") + e.what());
    } catch (const FormatError& e) {
        throw InputError(std::string("malformed config: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace sonoloc::cli
