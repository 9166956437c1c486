#include "voxtopo/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "voxtopo/phantoms.hpp"

namespace voxtopo {

// --- dataset ---------------------------------------------------------------

void LabeledDataset::validate() const {
    if (values.size() != n_samples * n_features) {
        throw Error("dataset matrix has " + std::to_string(values.size()) + " values, expected " +
                    std::to_string(n_samples * n_features));
    }
    if (labels.size() != n_samples) {
        throw Error("dataset has " + std::to_string(labels.size()) + " labels for " + std::to_string(n_samples) + " rows");
    }
    if (!feature_names.empty() && feature_names.size() != n_features) {
        throw Error("dataset feature-name count does not match the feature count");
    }
    if (class_names.empty()) {
        throw Error("dataset declares no classes");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw Error("dataset contains a non-finite feature value");
        }
    }
    for (int y : labels) {
        if (y < 0 || y >= class_count()) {
            throw Error("label " + std::to_string(y) + " outside the declared classes");
        }
    }
}

LabeledDataset LabeledDataset::subset_rows(std::span<const std::size_t> rows) const {
    LabeledDataset out;
    out.n_samples = rows.size();
    out.n_features = n_features;
    out.feature_names = feature_names;
    out.class_names = class_names;
    out.values.reserve(rows.size() * n_features);
    for (std::size_t r : rows) {
        const auto src = row(r);
        out.values.insert(out.values.end(), src.begin(), src.end());
        out.labels.push_back(labels[r]);
        if (!sample_ids.empty()) {
            out.sample_ids.push_back(sample_ids[r]);
        }
    }
    return out;
}

LabeledDataset LabeledDataset::subset_columns(std::span<const std::size_t> columns) const {
    LabeledDataset out;
    out.n_samples = n_samples;
    out.n_features = columns.size();
    out.labels = labels;
    out.class_names = class_names;
    out.sample_ids = sample_ids;
    out.values.reserve(n_samples * columns.size());
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (std::size_t c : columns) {
            out.values.push_back(values[i * n_features + c]);
        }
    }
    if (!feature_names.empty()) {
        for (std::size_t c : columns) {
            out.feature_names.push_back(feature_names[c]);
        }
    }
    return out;
}

LabeledDataset merge_binary(const LabeledDataset& ds) {
    LabeledDataset out = ds;
    for (int& y : out.labels) {
        if (y < 0 || y > 2) {
            throw Error("merge_binary expects labels in {0, 1, 2}");
        }
        y = std::min(y, 1);
    }
    if (ds.class_names.size() > 2) {
        std::string positive = ds.class_names[1];
        for (std::size_t c = 2; c < ds.class_names.size(); ++c) {
            positive += "+" + ds.class_names[c];
        }
        out.class_names = {ds.class_names[0], positive};
    }
    return out;
}

// --- configuration ---------------------------------------------------------

FeatureSelection FeatureSelection::parse(const std::string& text) {
    if (text == "mean") return {Mode::mean, 0.0};
    if (text == "off" || text == "none") return {Mode::off, 0.0};
    std::string number = text;
    if (number.rfind("absolute:", 0) == 0) {
        number = number.substr(9);
    }
    try {
        std::size_t used = 0;
        const double tau = std::stod(number, &used);
        if (used == number.size() && std::isfinite(tau)) {
            return {Mode::absolute, tau};
        }
    } catch (const std::exception&) {
    }
    throw Error("feature selection must be 'mean', 'off' or 'absolute:TAU', got '" + text + "'");
}

std::string FeatureSelection::to_string() const {
    switch (mode) {
        case Mode::mean: return "mean";
        case Mode::off: return "off";
        case Mode::absolute: return "absolute:" + std::to_string(threshold);
    }
    return "mean";
}

void ClassifierConfig::validate() const {
    if (n_estimators < 1) throw Error("n_estimators must be >= 1");
    if (!(learning_rate > 0.0)) throw Error("learning_rate must be > 0");
    if (max_depth < 1) throw Error("max_depth must be >= 1");
    if (!(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) throw Error("colsample_bytree must lie in (0, 1]");
    if (reg_lambda < 0.0) throw Error("reg_lambda must be >= 0");
    if (min_child_weight < 0.0) throw Error("min_child_weight must be >= 0");
    if (max_bins < 0 || max_bins == 1 || max_bins > 65535) throw Error("max_bins must be 0 (exact) or in [2, 65535]");
}

// --- training --------------------------------------------------------------

namespace {

// Gains below this are treated as no improvement.
constexpr double kMinGain = 1e-6;

struct BinnedFeatures {
    std::size_t rows = 0;
    std::vector<std::vector<double>> cuts;  // ascending observed values per feature
    std::vector<std::uint16_t> bins;        // feature-major: bins[f * rows + r]

    std::uint16_t at(std::size_t f, std::size_t r) const { return bins[f * rows + r]; }
};

BinnedFeatures bin_features(const LabeledDataset& ds, int max_bins) {
    BinnedFeatures b;
    b.rows = ds.n_samples;
    b.cuts.resize(ds.n_features);
    b.bins.resize(ds.n_features * ds.n_samples);
    std::vector<double> column(ds.n_samples);
    for (std::size_t f = 0; f < ds.n_features; ++f) {
        for (std::size_t r = 0; r < ds.n_samples; ++r) {
            column[r] = ds.values[r * ds.n_features + f];
        }
        std::vector<double> sorted = column;
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> distinct = sorted;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

        auto& cuts = b.cuts[f];
        if (max_bins == 0 || distinct.size() <= static_cast<std::size_t>(max_bins)) {
            cuts = distinct;
        } else {
            const std::size_t n = sorted.size();
            for (int q = 1; q <= max_bins; ++q) {
                const std::size_t rank = (static_cast<std::size_t>(q) * n + static_cast<std::size_t>(max_bins) - 1) /
                                         static_cast<std::size_t>(max_bins);
                const double v = sorted[std::max<std::size_t>(rank, 1) - 1];
                if (cuts.empty() || v > cuts.back()) {
                    cuts.push_back(v);
                }
            }
        }
        for (std::size_t r = 0; r < ds.n_samples; ++r) {
            const auto it = std::lower_bound(cuts.begin(), cuts.end(), column[r]);
            b.bins[f * b.rows + r] = static_cast<std::uint16_t>(it - cuts.begin());
        }
    }
    return b;
}

struct GradPair {
    double g = 0.0;
    double h = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const BinnedFeatures& data, const ClassifierConfig& cfg, std::vector<double>& importance)
        : data_(data), cfg_(cfg), importance_(importance) {}

    Model::Tree build(const std::vector<GradPair>& grad, std::vector<std::size_t> rows,
                      const std::vector<std::size_t>& features) {
        grad_ = &grad;
        features_ = &features;
        tree_.clear();
        tree_.emplace_back();
        grow(0, rows, 0);
        return std::move(tree_);
    }

private:
    struct Split {
        double gain = 0.0;
        std::size_t feature = 0;
        std::size_t bin = 0;
        bool found = false;
    };

    double score(double g, double h) const { return g * g / (h + cfg_.reg_lambda); }

    void grow(std::size_t node, std::vector<std::size_t>& rows, int depth) {
        double g = 0.0;
        double h = 0.0;
        for (std::size_t r : rows) {
            g += (*grad_)[r].g;
            h += (*grad_)[r].h;
        }
        tree_[node].value = -cfg_.learning_rate * g / (h + cfg_.reg_lambda);
        if (depth >= cfg_.max_depth || rows.size() < 2) {
            return;
        }

        const double parent = score(g, h);
        Split best;
        std::vector<GradPair> hist;
        for (std::size_t f : *features_) {
            const std::size_t n_bins = data_.cuts[f].size();
            if (n_bins < 2) {
                continue;
            }
            hist.assign(n_bins, GradPair{});
            for (std::size_t r : rows) {
                auto& cell = hist[data_.at(f, r)];
                cell.g += (*grad_)[r].g;
                cell.h += (*grad_)[r].h;
            }
            double gl = 0.0;
            double hl = 0.0;
            for (std::size_t b = 0; b + 1 < n_bins; ++b) {
                gl += hist[b].g;
                hl += hist[b].h;
                const double gr = g - gl;
                const double hr = h - hl;
                if (hl < cfg_.min_child_weight || hr < cfg_.min_child_weight) {
                    continue;
                }
                const double gain = score(gl, hl) + score(gr, hr) - parent;
                if (gain > std::max(cfg_.min_split_loss, kMinGain) && gain > best.gain) {
                    best = {gain, f, b, true};
                }
            }
        }
        if (!best.found) {
            return;
        }

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t r : rows) {
            (data_.at(best.feature, r) <= best.bin ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        importance_[best.feature] += best.gain;
        const int l = static_cast<int>(tree_.size());
        tree_.emplace_back();
        tree_.emplace_back();
        tree_[node].feature = static_cast<int>(best.feature);
        tree_[node].threshold = data_.cuts[best.feature][best.bin];
        tree_[node].left = l;
        tree_[node].right = l + 1;
        grow(static_cast<std::size_t>(l), left, depth + 1);
        grow(static_cast<std::size_t>(l + 1), right, depth + 1);
    }

    const BinnedFeatures& data_;
    const ClassifierConfig& cfg_;
    std::vector<double>& importance_;
    const std::vector<GradPair>* grad_ = nullptr;
    const std::vector<std::size_t>* features_ = nullptr;
    Model::Tree tree_;
};

double tree_output(const Model::Tree& tree, std::span<const double> row) {
    std::size_t node = 0;
    while (tree[node].feature >= 0) {
        const auto& n = tree[node];
        node = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return tree[node].value;
}

// Features for one tree: the `count` smallest random keys, ascending by index.
std::vector<std::size_t> sample_columns(std::size_t n_features, double rate, std::uint64_t seed, std::uint64_t tree) {
    const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(rate * static_cast<double>(n_features))));
    std::vector<std::size_t> all(n_features);
    std::iota(all.begin(), all.end(), 0);
    if (count >= n_features) {
        return all;
    }
    std::mt19937_64 rng(mix_seed(seed ^ mix_seed(tree + 1)));
    std::vector<std::pair<std::uint64_t, std::size_t>> keyed(n_features);
    for (std::size_t f = 0; f < n_features; ++f) {
        keyed[f] = {rng(), f};
    }
    std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(count), keyed.end());
    std::vector<std::size_t> chosen(count);
    for (std::size_t i = 0; i < count; ++i) {
        chosen[i] = keyed[i].second;
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

void softmax(std::vector<double>& v) {
    const double top = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double& x : v) {
        x = std::exp(x - top);
        sum += x;
    }
    for (double& x : v) {
        x /= sum;
    }
}

double sigmoid(double m) { return 1.0 / (1.0 + std::exp(-m)); }

}  // namespace

Model fit(const LabeledDataset& train, const ClassifierConfig& cfg) {
    train.validate();
    cfg.validate();
    const int k = train.class_count();
    std::vector<bool> present(static_cast<std::size_t>(k), false);
    for (int y : train.labels) {
        present[static_cast<std::size_t>(y)] = true;
    }
    if (std::count(present.begin(), present.end(), true) < 2) {
        throw Error("training set must contain at least two classes");
    }
    if (cfg.objective == Objective::binary_logistic && k != 2) {
        throw Error("binary_logistic needs exactly two classes, dataset declares " + std::to_string(k));
    }

    Model model;
    model.n_features_ = train.n_features;
    model.n_classes_ = k;
    model.trees_per_round_ = cfg.objective == Objective::binary_logistic ? 1 : k;
    model.importance_.assign(train.n_features, 0.0);

    const BinnedFeatures data = bin_features(train, cfg.max_bins);
    const std::size_t n = train.n_samples;
    const auto per_round = static_cast<std::size_t>(model.trees_per_round_);
    std::vector<double> margin(n * per_round, 0.0);
    std::vector<GradPair> grad(n);
    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), 0);
    TreeBuilder builder(data, cfg, model.importance_);
    std::vector<double> probs(per_round);
    std::vector<double> all_probs(n * per_round);

    std::uint64_t tree_index = 0;
    for (int round = 0; round < cfg.n_estimators; ++round) {
        // Gradients for every class come from the margins at the start of the round.
        for (std::size_t r = 0; r < n; ++r) {
            if (per_round == 1) {
                all_probs[r] = sigmoid(margin[r]);
            } else {
                std::copy_n(margin.begin() + static_cast<std::ptrdiff_t>(r * per_round), per_round, probs.begin());
                softmax(probs);
                std::copy(probs.begin(), probs.end(), all_probs.begin() + static_cast<std::ptrdiff_t>(r * per_round));
            }
        }
        for (std::size_t c = 0; c < per_round; ++c) {
            for (std::size_t r = 0; r < n; ++r) {
                const double p = all_probs[r * per_round + c];
                const int target_class = per_round == 1 ? 1 : static_cast<int>(c);
                const double y = train.labels[r] == target_class ? 1.0 : 0.0;
                const double h = per_round == 1 ? p * (1.0 - p) : 2.0 * p * (1.0 - p);
                grad[r] = {p - y, std::max(h, 1e-16)};
            }
            const auto features = sample_columns(train.n_features, cfg.colsample_bytree, cfg.seed, tree_index++);
            model.trees_.push_back(builder.build(grad, all_rows, features));
            const auto& tree = model.trees_.back();
            for (std::size_t r = 0; r < n; ++r) {
                margin[r * per_round + c] += tree_output(tree, train.row(r));
            }
        }
    }
    return model;
}

std::vector<double> Model::predict_proba(std::span<const double> row) const {
    if (row.size() != n_features_) {
        throw Error("model expects " + std::to_string(n_features_) + " features, got " + std::to_string(row.size()));
    }
    const auto per_round = static_cast<std::size_t>(trees_per_round_);
    std::vector<double> margin(per_round, 0.0);
    for (std::size_t t = 0; t < trees_.size(); ++t) {
        margin[t % per_round] += tree_output(trees_[t], row);
    }
    if (per_round == 1) {
        const double p = sigmoid(margin[0]);
        return {1.0 - p, p};
    }
    softmax(margin);
    return margin;
}

int Model::predict(std::span<const double> row) const {
    const auto p = predict_proba(row);
    return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

// --- feature selection -----------------------------------------------------

std::vector<std::size_t> select_features(std::span<const double> importances, const FeatureSelection& selection) {
    for (double v : importances) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw Error("feature importances must be finite and non-negative");
        }
    }
    std::vector<std::size_t> keep;
    if (importances.empty()) {
        return keep;
    }
    if (selection.mode == FeatureSelection::Mode::off) {
        keep.resize(importances.size());
        std::iota(keep.begin(), keep.end(), 0);
        return keep;
    }
    double threshold = selection.threshold;
    if (selection.mode == FeatureSelection::Mode::mean) {
        long double sum = 0.0L;
        for (double v : importances) {
            sum += v;
        }
        threshold = static_cast<double>(sum / static_cast<long double>(importances.size()));
        // Rounding in the mean must not drop features equal to it.
        threshold -= 1e-12 * std::max(1.0, std::abs(threshold));
    }
    for (std::size_t i = 0; i < importances.size(); ++i) {
        if (importances[i] >= threshold) {
            keep.push_back(i);
        }
    }
    if (keep.empty()) {
        keep.push_back(static_cast<std::size_t>(std::max_element(importances.begin(), importances.end()) - importances.begin()));
    }
    return keep;
}

// --- evaluation ------------------------------------------------------------

FoldResult evaluate_fold(const LabeledDataset& train, const LabeledDataset& test, const ClassifierConfig& cfg) {
    if (train.n_features != test.n_features) {
        throw Error("train and test feature counts differ");
    }
    FoldResult result;
    result.n_train = train.n_samples;
    result.n_test = test.n_samples;

    std::vector<std::size_t> keep(train.n_features);
    std::iota(keep.begin(), keep.end(), 0);
    if (cfg.feature_selection.mode != FeatureSelection::Mode::off) {
        const Model ranking = fit(train, cfg);
        keep = select_features(ranking.importances(), cfg.feature_selection);
    }
    const LabeledDataset train_sel = train.subset_columns(keep);
    const LabeledDataset test_sel = test.subset_columns(keep);
    for (std::size_t c : keep) {
        result.selected_features.push_back(train.feature_names.empty() ? std::to_string(c) : train.feature_names[c]);
    }

    const Model model = fit(train_sel, cfg);
    const int k = train.class_count();
    result.confusion = ConfusionMatrix::zeros(k);
    std::vector<std::vector<double>> scores(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < test_sel.n_samples; ++i) {
        const auto p = model.predict_proba(test_sel.row(i));
        const int predicted = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
        result.confusion.add(test_sel.labels[i], predicted);
        for (int c = 0; c < k; ++c) {
            scores[static_cast<std::size_t>(c)].push_back(p[static_cast<std::size_t>(c)]);
        }
    }
    result.metrics = metrics_from_confusion(result.confusion);

    // Binary: AUC of the positive-class probability. Multiclass: macro one-vs-rest.
    const int first = k == 2 ? 1 : 0;
    double auc_sum = 0.0;
    int auc_count = 0;
    for (int c = first; c < k; ++c) {
        std::unique_ptr<bool[]> positive(new bool[test_sel.n_samples]);
        std::size_t n_pos = 0;
        for (std::size_t i = 0; i < test_sel.n_samples; ++i) {
            positive[i] = test_sel.labels[i] == c;
            n_pos += positive[i] ? 1 : 0;
        }
        const std::span<const bool> pos_span(positive.get(), test_sel.n_samples);
        const auto& s = scores[static_cast<std::size_t>(c)];
        if (n_pos == 0 || n_pos == test_sel.n_samples) {
            result.metrics.zero_division.push_back("roc_auc[" + std::to_string(c) + "]");
            continue;
        }
        auc_sum += roc_auc(s, pos_span);
        ++auc_count;
        result.roc.push_back(roc_curve(s, pos_span, c));
    }
    result.roc_auc = auc_count > 0 ? auc_sum / auc_count : 0.0;
    return result;
}

std::vector<int> stratified_folds(std::span<const int> labels, int k, std::uint64_t seed) {
    if (k < 2) {
        throw Error("cross-validation needs at least 2 folds");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i]].push_back(i);
    }
    std::vector<int> fold(labels.size(), 0);
    std::size_t dealt = 0;
    for (auto& [label, members] : by_class) {
        std::mt19937_64 rng(mix_seed(seed ^ mix_seed(static_cast<std::uint64_t>(label) + 0x100)));
        for (std::size_t i = members.size(); i > 1; --i) {
            std::swap(members[i - 1], members[rng() % i]);
        }
        for (std::size_t idx : members) {
            fold[idx] = static_cast<int>(dealt++ % static_cast<std::size_t>(k));
        }
    }
    return fold;
}

ClassifierReport cross_validate(const LabeledDataset& ds, const ClassifierConfig& cfg, int k, int workers) {
    ds.validate();
    cfg.validate();
    if (k < 2) {
        throw Error("cross-validation needs at least 2 folds");
    }
    std::vector<std::size_t> support(static_cast<std::size_t>(ds.class_count()), 0);
    for (int y : ds.labels) {
        ++support[static_cast<std::size_t>(y)];
    }
    for (int c = 0; c < ds.class_count(); ++c) {
        if (support[static_cast<std::size_t>(c)] < static_cast<std::size_t>(k)) {
            throw Error("class '" + ds.class_names[static_cast<std::size_t>(c)] + "' has " +
                        std::to_string(support[static_cast<std::size_t>(c)]) + " samples, fewer than " +
                        std::to_string(k) + " folds");
        }
    }

    const auto fold_of = stratified_folds(ds.labels, k, cfg.seed);
    ClassifierReport report;
    report.config = cfg;
    report.folds = k;
    report.class_names = ds.class_names;
    report.per_fold.resize(static_cast<std::size_t>(k));

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int f = next++; f < k; f = next++) {
            try {
                std::vector<std::size_t> train_rows;
                std::vector<std::size_t> test_rows;
                for (std::size_t i = 0; i < ds.n_samples; ++i) {
                    (fold_of[i] == f ? test_rows : train_rows).push_back(i);
                }
                ClassifierConfig fold_cfg = cfg;
                fold_cfg.seed = mix_seed(cfg.seed + static_cast<std::uint64_t>(f));
                report.per_fold[static_cast<std::size_t>(f)] =
                    evaluate_fold(ds.subset_rows(train_rows), ds.subset_rows(test_rows), fold_cfg);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const int threads = std::clamp(workers, 1, k);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    const int classes = ds.class_count();
    report.total_confusion = ConfusionMatrix::zeros(classes);
    report.mean_confusion_normalized.assign(static_cast<std::size_t>(classes),
                                            std::vector<double>(static_cast<std::size_t>(classes), 0.0));
    for (const auto& fr : report.per_fold) {
        report.mean.accuracy += fr.metrics.accuracy;
        report.mean.precision += fr.metrics.precision;
        report.mean.recall += fr.metrics.recall;
        report.mean.f1 += fr.metrics.f1;
        report.mean.sensitivity += fr.metrics.sensitivity;
        report.mean.specificity += fr.metrics.specificity;
        report.mean_roc_auc += fr.roc_auc;
        const auto norm = fr.confusion.row_normalized();
        for (std::size_t i = 0; i < static_cast<std::size_t>(classes); ++i) {
            for (std::size_t j = 0; j < static_cast<std::size_t>(classes); ++j) {
                report.total_confusion.counts[i][j] += fr.confusion.counts[i][j];
                report.mean_confusion_normalized[i][j] += norm[i][j];
            }
        }
        for (const auto& flag : fr.metrics.zero_division) {
            if (std::find(report.mean.zero_division.begin(), report.mean.zero_division.end(), flag) ==
                report.mean.zero_division.end()) {
                report.mean.zero_division.push_back(flag);
            }
        }
    }
    const double kd = static_cast<double>(k);
    for (double* m : {&report.mean.accuracy, &report.mean.precision, &report.mean.recall, &report.mean.f1,
                      &report.mean.sensitivity, &report.mean.specificity, &report.mean_roc_auc}) {
        *m /= kd;
    }
    for (auto& row : report.mean_confusion_normalized) {
        for (double& v : row) {
            v /= kd;
        }
    }
    return report;
}

}  // namespace voxtopo
