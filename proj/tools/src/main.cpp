#include "sonoloc/errors.hpp"
#include "sonoloc/io/json_codec.hpp"
#include "sonoloc_cli/stages.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <thread>

namespace {

using namespace sonoloc;
using namespace sonoloc::cli;

struct Options {
    std::string out = "sonoloc_out";
    std::size_t jobs = 1;
    bool print_config = false;
    std::optional<std::string> scene;
    std::optional<std::string> heatmaps_in;
    std::optional<std::string> predictions_in;
    std::vector<double> iou_thresholds;
    Config config;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out, "Workspace directory")->capture_default_str();
    cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_flag("--print-config", o.print_config, "Print the effective configuration and exit");
}

void add_scene_options(CLI::App* cmd, Options& o) {
    Config& c = o.config;
    cmd->add_option("--scene", o.scene, "Scene JSON file (default: generated workbench scenes)");
    cmd->add_option("--profile", c.profile, "Action profile")
        ->capture_default_str()
        ->check(CLI::IsMember({"chiseling", "drilling", "sawing"}));
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    cmd->add_option("--clips", c.clips, "Generated clips (0: profile default)")->capture_default_str();
    cmd->add_option("--duration", c.duration, "Generated clip duration in seconds")->capture_default_str();
    cmd->add_option("--snr-db", c.snr_db, "Sensor SNR in dB");
    cmd->add_option("--grid-distance", c.grid.distance, "Scan plane distance in meters")->capture_default_str();
    cmd->add_option("--grid-width", c.grid.width, "Scan plane width in meters")->capture_default_str();
    cmd->add_option("--grid-height", c.grid.height, "Scan plane height in meters")->capture_default_str();
    cmd->add_option("--grid-nx", c.grid.nx, "Scan grid columns")->capture_default_str();
    cmd->add_option("--grid-ny", c.grid.ny, "Scan grid rows")->capture_default_str();
    cmd->add_option("--cluster-radius", c.cluster.radius, "DBSCAN radius in meters")->capture_default_str();
    cmd->add_option("--cluster-min-weight", c.cluster.min_weight, "DBSCAN minimum neighborhood weight")
        ->capture_default_str();
    cmd->add_option("--epochs", c.train.epochs, "Classifier training epochs")->capture_default_str();
    cmd->add_option("--learning-rate", c.train.learning_rate, "Classifier learning rate")->capture_default_str();
    cmd->add_option("--iou-thresholds", c.iou_thresholds, "Recall IoU thresholds")->expected(1, -1);
    cmd->add_flag("!--no-calibration-noise", c.calibration_noise, "Disable fusion calibration noise");
}

void print_summary(const EvaluationSummary& s) {
    std::cout << std::fixed << std::setprecision(4);
    std::cout << "relaxed F1 " << s.relaxed_f1 << "  hard F1 " << s.hard_f1 << "\n";
    for (std::size_t i = 0; i < s.thresholds.size(); ++i) {
        std::cout << "recall@" << s.thresholds[i] << " " << s.recall[i] << "\n";
    }
    std::cout << "localizations " << s.localizations << "\n";
}

std::optional<fs::path> as_path(const std::optional<std::string>& s) {
    return s ? std::optional<fs::path>(*s) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acoustic event detection and localization pipeline"};
    app.require_subcommand(1);
    Options o;

    auto* simulate = app.add_subcommand("simulate", "Generate synthetic recordings, point clouds and ground truth");
    auto* train = app.add_subcommand("train", "Train the per-fold event classifiers");
    auto* detect = app.add_subcommand("detect", "Detect events and schedule localization triggers");
    auto* beamform = app.add_subcommand("beamform", "Compute one acoustic heatmap per trigger");
    auto* fuse = app.add_subcommand("fuse", "Project heatmaps onto the point clouds");
    auto* localize = app.add_subcommand("localize", "Cluster weighted clouds into boxes");
    auto* evaluate = app.add_subcommand("evaluate", "Write detection and localization reports");
    auto* pipeline = app.add_subcommand("pipeline", "Run every stage in order");

    for (auto* cmd : {simulate, train, detect, beamform, fuse, localize, evaluate, pipeline}) add_common(cmd, o);
    add_scene_options(simulate, o);
    add_scene_options(pipeline, o);
    for (auto* cmd : {detect, pipeline}) {
        cmd->add_option("--predictions-in", o.predictions_in, "External per-frame probabilities (JSONL)")
            ->check(CLI::ExistingFile);
    }
    for (auto* cmd : {beamform, pipeline}) {
        cmd->add_option("--heatmaps-in", o.heatmaps_in, "Directory of precomputed heatmaps")
            ->check(CLI::ExistingDirectory);
    }
    evaluate->add_option("--iou-thresholds", o.iou_thresholds, "Recall IoU thresholds")->expected(1, -1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const Workspace ws{o.out};
    const std::size_t jobs = o.jobs;
    try {
        const bool creates = simulate->parsed() || pipeline->parsed();
        if (o.print_config) {
            Config c = creates ? o.config : load_config(ws);
            c.validate();
            std::cout << config_to_json(c).dump(2) << "\n";
            return 0;
        }
        if (o.scene && !fs::exists(*o.scene)) throw InputError("scene file not found: " + *o.scene);
        if (simulate->parsed()) run_simulate(o.config, ws, as_path(o.scene), jobs);
        if (train->parsed()) run_train(ws, jobs);
        if (detect->parsed()) run_detect(ws, as_path(o.predictions_in), jobs);
        if (beamform->parsed()) run_beamform(ws, as_path(o.heatmaps_in), jobs);
        if (fuse->parsed()) run_fuse(ws, jobs);
        if (localize->parsed()) run_localize(ws, jobs);
        if (evaluate->parsed()) print_summary(run_evaluate(ws, o.iou_thresholds));
        if (pipeline->parsed()) {
            print_summary(run_pipeline(o.config, ws, as_path(o.scene), as_path(o.predictions_in),
                                       as_path(o.heatmaps_in), jobs));
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "stage failed: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
