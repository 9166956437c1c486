#pragma once

#include <span>
#include <string>
#include <vector>

namespace voxtopo {

/// counts[true_class][predicted_class].
struct ConfusionMatrix {
    std::vector<std::vector<long long>> counts;

    static ConfusionMatrix zeros(int classes);
    int classes() const { return static_cast<int>(counts.size()); }
    long long total() const;
    void add(int truth, int predicted) { ++counts[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)]; }
    /// Rows divided by their sums (zero rows stay zero).
    std::vector<std::vector<double>> row_normalized() const;
};

/// Accuracy plus precision/recall/F1 and sensitivity/specificity. With two
/// classes these describe class 1 as the positive class; with more they are
/// macro averages (specificity per class is one-vs-rest).
struct MetricSet {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
    /// Names of ratios whose denominator was zero; those were reported as 0.
    std::vector<std::string> zero_division;
};

MetricSet metrics_from_confusion(const ConfusionMatrix& cm);

/// Area under the ROC curve of `scores` for the positive samples, ties counted
/// half (Mann-Whitney). Throws when either class is absent.
double roc_auc(std::span<const double> scores, std::span<const bool> positive);

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    int positive_class = 1;
    std::vector<RocPoint> points;
};

/// ROC points at every distinct score, from (0, 0) to (1, 1).
RocCurve roc_curve(std::span<const double> scores, std::span<const bool> positive, int positive_class);

}  // namespace voxtopo
