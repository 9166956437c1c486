#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "voxtopo/metrics.hpp"
#include "voxtopo/error.hpp"

namespace voxtopo {

/// Row-major feature matrix with integer class labels 0..K-1.
struct LabeledDataset {
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
    std::vector<double> values;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::vector<std::string> sample_ids;

    std::span<const double> row(std::size_t i) const { return {values.data() + i * n_features, n_features}; }
    int class_count() const { return static_cast<int>(class_names.size()); }

    /// Throws unless shapes agree, values are finite and labels lie in range.
    void validate() const;
    LabeledDataset subset_rows(std::span<const std::size_t> rows) const;
    LabeledDataset subset_columns(std::span<const std::size_t> columns) const;
};

/// Collapses classes 1 and 2 into class 1 ("diseased"); 0 stays 0.
LabeledDataset merge_binary(const LabeledDataset& ds);

enum class Objective { binary_logistic, multiclass_softmax };

struct FeatureSelection {
    enum class Mode { mean, absolute, off };
    Mode mode = Mode::mean;
    double threshold = 0.0;

    static FeatureSelection parse(const std::string& text);
    std::string to_string() const;
};

struct ClassifierConfig {
    int n_estimators = 500;
    double learning_rate = 0.2;
    int max_depth = 7;
    double colsample_bytree = 0.3;
    Objective objective = Objective::multiclass_softmax;
    std::uint64_t seed = 0;
    FeatureSelection feature_selection{};

    double reg_lambda = 1.0;
    double min_split_loss = 0.0;
    double min_child_weight = 1.0;
    /// Histogram bins per feature; 0 selects exact splits on every distinct value.
    int max_bins = 64;

    void validate() const;
};

/// Gradient-boosted regression trees on the logistic / softmax loss.
///
/// Split thresholds are always observed training values and a sample goes left
/// when x <= threshold, so any strictly increasing per-feature transform applied
/// to train and test alike leaves predictions unchanged.
class Model {
public:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };
    using Tree = std::vector<Node>;

    std::size_t feature_count() const { return n_features_; }
    int class_count() const { return n_classes_; }
    /// Total split gain accumulated per feature.
    const std::vector<double>& importances() const { return importance_; }
    const std::vector<Tree>& trees() const { return trees_; }

    /// Class probabilities for one row (size class_count()).
    std::vector<double> predict_proba(std::span<const double> row) const;
    int predict(std::span<const double> row) const;

private:
    friend Model fit(const LabeledDataset& train, const ClassifierConfig& cfg);

    std::size_t n_features_ = 0;
    int n_classes_ = 0;
    int trees_per_round_ = 1;
    std::vector<Tree> trees_;
    std::vector<double> importance_;
};

Model fit(const LabeledDataset& train, const ClassifierConfig& cfg);

/// Indices of features to keep. Never empty: falls back to the single most
/// important feature (lowest index on ties).
std::vector<std::size_t> select_features(std::span<const double> importances, const FeatureSelection& selection);

struct FoldResult {
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    MetricSet metrics;
    double roc_auc = 0.0;
    ConfusionMatrix confusion;
    std::vector<std::string> selected_features;
    std::vector<RocCurve> roc;
};

/// Fits feature selection and the model on `train` only, then scores `test`.
FoldResult evaluate_fold(const LabeledDataset& train, const LabeledDataset& test, const ClassifierConfig& cfg);

struct ClassifierReport {
    ClassifierConfig config;
    int folds = 0;
    std::vector<std::string> class_names;
    std::vector<FoldResult> per_fold;
    MetricSet mean;
    double mean_roc_auc = 0.0;
    /// Counts summed over folds.
    ConfusionMatrix total_confusion;
    /// Mean of the per-fold row-normalised confusion matrices.
    std::vector<std::vector<double>> mean_confusion_normalized;
};

/// Stratified assignment of each sample to one of k folds; classes are shuffled
/// with `seed` and dealt round-robin.
std::vector<int> stratified_folds(std::span<const int> labels, int k, std::uint64_t seed);

/// Stratified k-fold cross-validation. Folds run on up to `workers` threads;
/// results do not depend on the worker count.
ClassifierReport cross_validate(const LabeledDataset& ds, const ClassifierConfig& cfg, int k = 10, int workers = 1);

}  // namespace voxtopo
