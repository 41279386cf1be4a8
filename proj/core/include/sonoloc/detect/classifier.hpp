#pragma once

#include "sonoloc/detect/augment.hpp"
#include "sonoloc/detect/features.hpp"
#include "sonoloc/dsp/mel.hpp"
#include "sonoloc/sim/scene.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sonoloc::detect {

enum class ClassifierKind { energy_threshold, linear_logistic };

std::string_view to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(std::string_view name);

/// Binary event-presence classifier over pooled log-mel frames.
///
/// linear_logistic: p = sigmoid(w . ((x - mean) / scale) + bias); empty
/// mean/scale vectors mean no standardization.
/// energy_threshold: p = sigmoid(mean(x) - threshold), i.e. the decision at
/// 0.5 is mean log-mel energy >= threshold.
struct ClassifierModel {
    ClassifierKind kind = ClassifierKind::linear_logistic;
    std::size_t dim = 128;
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> feature_mean;
    std::vector<double> feature_scale;
    double threshold = 0.0;
    double decision_threshold = 0.5;

    // Training metadata.
    std::uint64_t seed = 0;
    int epochs = 0;
    int fold = -1;
    bool degenerate_labels = false;

    void validate() const;
    double probability(std::span<const double> feature) const;
};

/// Row-major frames with 0/1 labels and per-sample loss weights.
struct TrainingSet {
    std::size_t dim = 0;
    std::vector<double> x;
    std::vector<std::uint8_t> y;
    std::vector<double> sample_weight;

    std::size_t size() const { return y.size(); }
    std::span<const double> row(std::size_t i) const { return {x.data() + i * dim, dim}; }
    void append(const FeatureSequence& features, std::span<const std::uint8_t> labels);
};

struct TrainConfig {
    dsp::SpectrogramConfig spectrogram;
    double learning_rate = 0.5;
    int epochs = 300;
    double l2 = 1e-3;
    bool balance_classes = true;
    double decision_threshold = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Weighted mean cross-entropy plus (l2 / 2) |w|^2 over the rows of `data`
/// as given (no standardization).
double logistic_loss(const TrainingSet& data, std::span<const double> w, double b, double l2);

/// Analytic gradient of logistic_loss.
void logistic_gradient(const TrainingSet& data, std::span<const double> w, double b, double l2,
                       std::span<double> grad_w, double& grad_b);

/// Standardizes features, then full-batch gradient descent from zero weights.
/// A step that increases the loss is rejected and the step size halved.
/// `loss_history`, when given, receives the loss after every epoch
/// (entry 0 is the initial loss).
ClassifierModel fit_logistic(const TrainingSet& data, const TrainConfig& config,
                             std::vector<double>* loss_history = nullptr);

/// Threshold on mean frame energy maximizing balanced accuracy; with a single
/// class it places the threshold beyond every sample of that class.
ClassifierModel fit_energy_threshold(const TrainingSet& data);

/// A recording with its event-presence spans (seconds), already mono 16 kHz.
struct LabeledClip {
    std::string id;
    std::vector<double> audio;
    std::vector<sim::Interval> event_spans;
};

/// Trains one model on the clips listed in `indices`: the originals plus
/// `augment.copies` augmented copies of each. Falls back to the energy
/// threshold (flagged) when all training labels share one class.
ClassifierModel train_on_clips(std::span<const LabeledClip> clips, std::span<const std::size_t> indices,
                               const AugmentationSpec& augment, const TrainConfig& config, int fold_id);

/// One model per fold, each trained on all clips outside the fold. Fold
/// training runs on `jobs` threads and does not depend on the thread count.
std::vector<ClassifierModel> train_classifier(std::span<const LabeledClip> clips,
                                              std::span<const std::size_t> fold_of_clip, std::size_t folds,
                                              const AugmentationSpec& augment, const TrainConfig& config,
                                              std::size_t jobs = 1);

}  // namespace sonoloc::detect
