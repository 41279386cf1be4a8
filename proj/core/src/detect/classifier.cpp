#include "sonoloc/detect/classifier.hpp"

#include "sonoloc/errors.hpp"
#include "sonoloc/parallel.hpp"
#include "sonoloc/sim/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sonoloc::detect {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double mean_of(std::span<const double> v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double total_weight(const TrainingSet& data) {
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) s += data.sample_weight.empty() ? 1.0 : data.sample_weight[i];
    return s;
}

double weight_of(const TrainingSet& data, std::size_t i) {
    return data.sample_weight.empty() ? 1.0 : data.sample_weight[i];
}

void check_set(const TrainingSet& data) {
    if (data.size() == 0) throw InvalidArgument("training set is empty");
    if (data.x.size() != data.size() * data.dim) throw DimensionMismatch("training rows do not match dimension");
    if (!data.sample_weight.empty() && data.sample_weight.size() != data.size()) {
        throw DimensionMismatch("sample weights do not match training rows");
    }
}

}  // namespace

std::string_view to_string(ClassifierKind kind) {
    return kind == ClassifierKind::energy_threshold ? "energy-threshold" : "linear-logistic";
}

ClassifierKind classifier_kind_from_string(std::string_view name) {
    if (name == "energy-threshold") return ClassifierKind::energy_threshold;
    if (name == "linear-logistic") return ClassifierKind::linear_logistic;
    throw InvalidArgument("unknown classifier kind: " + std::string(name));
}

void ClassifierModel::validate() const {
    if (dim == 0) throw InvalidArgument("classifier dimension must be positive");
    if (!(decision_threshold > 0.0 && decision_threshold < 1.0)) {
        throw InvalidArgument("decision threshold must lie in (0, 1)");
    }
    if (kind == ClassifierKind::energy_threshold) {
        if (!std::isfinite(threshold)) throw InvalidArgument("energy threshold must be finite");
        return;
    }
    if (weights.size() != dim) throw DimensionMismatch("classifier weights do not match dimension");
    if (!feature_mean.empty() && (feature_mean.size() != dim || feature_scale.size() != dim)) {
        throw DimensionMismatch("standardization vectors do not match dimension");
    }
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(weights) || !finite(feature_mean) || !finite(feature_scale) || !std::isfinite(bias)) {
        throw InvalidArgument("classifier parameters must be finite");
    }
    for (double s : feature_scale) {
        if (s <= 0.0) throw InvalidArgument("feature scale must be positive");
    }
}

double ClassifierModel::probability(std::span<const double> feature) const {
    if (feature.size() != dim) throw DimensionMismatch("feature dimension does not match classifier");
    if (kind == ClassifierKind::energy_threshold) return sigmoid(mean_of(feature) - threshold);
    double z = bias;
    if (feature_mean.empty()) {
        z += dot(weights, feature);
    } else {
        for (std::size_t i = 0; i < dim; ++i) z += weights[i] * (feature[i] - feature_mean[i]) / feature_scale[i];
    }
    return sigmoid(z);
}

void TrainingSet::append(const FeatureSequence& features, std::span<const std::uint8_t> labels) {
    if (labels.size() != features.n_frames) throw DimensionMismatch("labels do not match feature frames");
    if (dim == 0) dim = features.dim;
    if (features.dim != dim) throw DimensionMismatch("feature dimension differs between clips");
    x.insert(x.end(), features.values.begin(), features.values.end());
    y.insert(y.end(), labels.begin(), labels.end());
    if (!sample_weight.empty()) sample_weight.resize(y.size(), 1.0);
}

void TrainConfig::validate() const {
    spectrogram.validate();
    if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
    if (epochs < 0) throw InvalidArgument("epochs must be non-negative");
    if (!(l2 >= 0.0)) throw InvalidArgument("l2 penalty must be non-negative");
    if (!(decision_threshold > 0.0 && decision_threshold < 1.0)) {
        throw InvalidArgument("decision threshold must lie in (0, 1)");
    }
}

double logistic_loss(const TrainingSet& data, std::span<const double> w, double b, double l2) {
    check_set(data);
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double z = dot(w, data.row(i)) + b;
        loss += weight_of(data, i) * (softplus(z) - (data.y[i] ? z : 0.0));
    }
    loss /= total_weight(data);
    return loss + 0.5 * l2 * dot(w, w);
}

void logistic_gradient(const TrainingSet& data, std::span<const double> w, double b, double l2,
                       std::span<double> grad_w, double& grad_b) {
    check_set(data);
    if (grad_w.size() != data.dim || w.size() != data.dim) throw DimensionMismatch("gradient dimension mismatch");
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = data.row(i);
        const double r = weight_of(data, i) * (sigmoid(dot(w, row) + b) - (data.y[i] ? 1.0 : 0.0));
        for (std::size_t d = 0; d < data.dim; ++d) grad_w[d] += r * row[d];
        grad_b += r;
    }
    const double norm = total_weight(data);
    for (std::size_t d = 0; d < data.dim; ++d) grad_w[d] = grad_w[d] / norm + l2 * w[d];
    grad_b /= norm;
}

ClassifierModel fit_logistic(const TrainingSet& data, const TrainConfig& config, std::vector<double>* loss_history) {
    check_set(data);
    config.validate();
    const std::size_t n = data.size();
    const std::size_t dim = data.dim;

    ClassifierModel model;
    model.kind = ClassifierKind::linear_logistic;
    model.dim = dim;
    model.decision_threshold = config.decision_threshold;
    model.seed = config.seed;
    model.feature_mean.assign(dim, 0.0);
    model.feature_scale.assign(dim, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) model.feature_mean[d] += data.x[i * dim + d];
    }
    for (double& m : model.feature_mean) m /= static_cast<double>(n);
    std::vector<double> var(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double c = data.x[i * dim + d] - model.feature_mean[d];
            var[d] += c * c;
        }
    }
    for (std::size_t d = 0; d < dim; ++d) {
        const double s = std::sqrt(var[d] / static_cast<double>(n));
        model.feature_scale[d] = s > 1e-9 ? s : 1.0;
    }

    TrainingSet z;
    z.dim = dim;
    z.y = data.y;
    z.x.resize(data.x.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            z.x[i * dim + d] = (data.x[i * dim + d] - model.feature_mean[d]) / model.feature_scale[d];
        }
    }
    z.sample_weight.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) z.sample_weight[i] = weight_of(data, i);
    if (config.balance_classes) {
        const auto pos = static_cast<double>(std::count(z.y.begin(), z.y.end(), 1));
        const double neg = static_cast<double>(n) - pos;
        if (pos > 0.0 && neg > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                z.sample_weight[i] *= static_cast<double>(n) / (2.0 * (z.y[i] ? pos : neg));
            }
        }
    }

    std::vector<double> w(dim, 0.0), grad(dim), trial(dim);
    double b = 0.0, grad_b = 0.0;
    double step = config.learning_rate;
    double loss = logistic_loss(z, w, b, config.l2);
    if (loss_history) loss_history->assign(1, loss);
    int epoch = 0;
    for (; epoch < config.epochs; ++epoch) {
        logistic_gradient(z, w, b, config.l2, grad, grad_b);
        double next = loss;
        double trial_b = b;
        bool accepted = false;
        for (int attempt = 0; attempt < 60; ++attempt) {
            for (std::size_t d = 0; d < dim; ++d) trial[d] = w[d] - step * grad[d];
            trial_b = b - step * grad_b;
            next = logistic_loss(z, trial, trial_b, config.l2);
            if (next <= loss) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
        w.swap(trial);
        b = trial_b;
        loss = next;
        if (loss_history) loss_history->push_back(loss);
    }
    model.weights = std::move(w);
    model.bias = b;
    model.epochs = epoch;
    return model;
}

ClassifierModel fit_energy_threshold(const TrainingSet& data) {
    check_set(data);
    const std::size_t n = data.size();
    std::vector<double> energy(n);
    for (std::size_t i = 0; i < n; ++i) energy[i] = mean_of(data.row(i));
    const auto pos = static_cast<std::size_t>(std::count(data.y.begin(), data.y.end(), 1));

    ClassifierModel model;
    model.kind = ClassifierKind::energy_threshold;
    model.dim = data.dim;
    const auto [lo, hi] = std::minmax_element(energy.begin(), energy.end());
    if (pos == 0) {
        model.threshold = *hi + 1.0;
        return model;
    }
    if (pos == n) {
        model.threshold = *lo - 1.0;
        return model;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return energy[a] < energy[b]; });
    // Threshold between sorted[i-1] and sorted[i]: everything from i upward is positive.
    const double neg = static_cast<double>(n - pos);
    double best = -1.0;
    std::size_t neg_below = 0, pos_below = 0;
    model.threshold = energy[order[0]] - 1.0;
    for (std::size_t i = 0; i <= n; ++i) {
        if (i == 0 || i == n || energy[order[i]] > energy[order[i - 1]]) {
            const double tnr = static_cast<double>(neg_below) / neg;
            const double tpr = static_cast<double>(pos - pos_below) / static_cast<double>(pos);
            const double score = 0.5 * (tnr + tpr);
            if (score > best) {
                best = score;
                if (i == 0) {
                    model.threshold = energy[order[0]] - 1.0;
                } else if (i == n) {
                    model.threshold = energy[order[n - 1]] + 1.0;
                } else {
                    model.threshold = 0.5 * (energy[order[i - 1]] + energy[order[i]]);
                }
            }
        }
        if (i < n) (data.y[order[i]] ? pos_below : neg_below)++;
    }
    return model;
}

ClassifierModel train_on_clips(std::span<const LabeledClip> clips, std::span<const std::size_t> indices,
                               const AugmentationSpec& augment, const TrainConfig& config, int fold_id) {
    config.validate();
    augment.validate();
    if (indices.empty()) throw InvalidArgument("no training clips");
    TrainingSet data;
    for (std::size_t idx : indices) {
        if (idx >= clips.size()) throw InvalidArgument("training clip index out of range");
        const LabeledClip& clip = clips[idx];
        const FeatureSequence base = extract_features(clip.audio, config.spectrogram);
        const std::vector<std::uint8_t> labels = frame_labels(clip.event_spans, base.n_frames, config.spectrogram);
        data.append(base, labels);
        for (std::size_t c = 0; c < augment.copies; ++c) {
            const std::uint64_t stream = (static_cast<std::uint64_t>(fold_id + 1) << 32) ^ (idx << 8) ^ c;
            std::mt19937_64 rng(sim::mix_seed(augment.seed, stream));
            const AugmentationDraw draw = draw_augmentation(augment, rng);
            const std::vector<double> audio = apply_augmentation(clip.audio, draw, rng);
            data.append(extract_features(audio, config.spectrogram), labels);
        }
    }

    const auto pos = std::count(data.y.begin(), data.y.end(), 1);
    ClassifierModel model;
    if (pos == 0 || static_cast<std::size_t>(pos) == data.size()) {
        model = fit_energy_threshold(data);
        model.degenerate_labels = true;
        model.decision_threshold = config.decision_threshold;
        model.seed = config.seed;
    } else {
        model = fit_logistic(data, config);
    }
    model.fold = fold_id;
    return model;
}

std::vector<ClassifierModel> train_classifier(std::span<const LabeledClip> clips,
                                              std::span<const std::size_t> fold_of_clip, std::size_t folds,
                                              const AugmentationSpec& augment, const TrainConfig& config,
                                              std::size_t jobs) {
    if (fold_of_clip.size() != clips.size()) throw DimensionMismatch("fold assignment does not match clips");
    if (folds == 0 || folds > clips.size()) throw InvalidArgument("fold count must lie in [1, clips]");
    std::vector<ClassifierModel> models(folds);
    parallel_for(folds, jobs, [&](std::size_t f) {
        std::vector<std::size_t> train;
        for (std::size_t i = 0; i < clips.size(); ++i) {
            // With a single fold there is no held-out set; train on everything.
            if (folds == 1 || fold_of_clip[i] != f) train.push_back(i);
        }
        models[f] = train_on_clips(clips, train, augment, config, static_cast<int>(f));
    });
    return models;
}

}  // namespace sonoloc::detect
