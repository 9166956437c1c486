#include "voxtopo/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "voxtopo/error.hpp"

namespace voxtopo {

ConfusionMatrix ConfusionMatrix::zeros(int classes) {
    const auto k = static_cast<std::size_t>(classes);
    return {std::vector<std::vector<long long>>(k, std::vector<long long>(k, 0))};
}

long long ConfusionMatrix::total() const {
    long long t = 0;
    for (const auto& row : counts) {
        t = std::accumulate(row.begin(), row.end(), t);
    }
    return t;
}

std::vector<std::vector<double>> ConfusionMatrix::row_normalized() const {
    std::vector<std::vector<double>> out;
    for (const auto& row : counts) {
        const long long sum = std::accumulate(row.begin(), row.end(), 0LL);
        std::vector<double> r(row.size(), 0.0);
        if (sum > 0) {
            for (std::size_t j = 0; j < row.size(); ++j) {
                r[j] = static_cast<double>(row[j]) / static_cast<double>(sum);
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

struct Ratio {
    MetricSet& m;
    double operator()(double num, double den, const std::string& name) const {
        if (den == 0.0) {
            if (std::find(m.zero_division.begin(), m.zero_division.end(), name) == m.zero_division.end()) {
                m.zero_division.push_back(name);
            }
            return 0.0;
        }
        return num / den;
    }
};

}  // namespace

MetricSet metrics_from_confusion(const ConfusionMatrix& cm) {
    const int k = cm.classes();
    if (k < 2) {
        throw Error("confusion matrix needs at least two classes");
    }
    for (const auto& row : cm.counts) {
        if (static_cast<int>(row.size()) != k) {
            throw Error("confusion matrix must be square");
        }
        for (long long v : row) {
            if (v < 0) {
                throw Error("confusion matrix entries must be non-negative");
            }
        }
    }
    const long long total = cm.total();
    if (total == 0) {
        throw Error("confusion matrix is all zeros");
    }

    MetricSet m;
    Ratio ratio{m};
    long long trace = 0;
    for (int i = 0; i < k; ++i) {
        trace += cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    m.accuracy = static_cast<double>(trace) / static_cast<double>(total);

    auto at = [&](int i, int j) { return static_cast<double>(cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]); };
    // One-vs-rest counts for class c.
    auto per_class = [&](int c, double& precision, double& recall, double& f1, double& specificity) {
        double tp = at(c, c);
        double fn = 0.0;
        double fp = 0.0;
        for (int j = 0; j < k; ++j) {
            if (j != c) {
                fn += at(c, j);
                fp += at(j, c);
            }
        }
        const double tn = static_cast<double>(total) - tp - fn - fp;
        const std::string suffix = k == 2 ? "" : "[" + std::to_string(c) + "]";
        precision = ratio(tp, tp + fp, "precision" + suffix);
        recall = ratio(tp, tp + fn, "recall" + suffix);
        f1 = ratio(2.0 * precision * recall, precision + recall, "f1" + suffix);
        specificity = ratio(tn, tn + fp, "specificity" + suffix);
    };

    if (k == 2) {
        per_class(1, m.precision, m.recall, m.f1, m.specificity);
        m.sensitivity = m.recall;
        return m;
    }
    for (int c = 0; c < k; ++c) {
        double p = 0.0, r = 0.0, f = 0.0, s = 0.0;
        per_class(c, p, r, f, s);
        m.precision += p / k;
        m.recall += r / k;
        m.f1 += f / k;
        m.specificity += s / k;
    }
    m.sensitivity = m.recall;
    return m;
}

double roc_auc(std::span<const double> scores, std::span<const bool> positive) {
    if (scores.size() != positive.size()) {
        throw Error("roc_auc: scores and labels differ in length");
    }
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of midranks of the positives.
    double rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
            ++j;
        }
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            if (positive[idx[t]]) {
                rank_sum += midrank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = scores.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw Error("roc_auc needs both positive and negative samples");
    }
    const double np = static_cast<double>(n_pos);
    return (rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

RocCurve roc_curve(std::span<const double> scores, std::span<const bool> positive, int positive_class) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    const auto n_pos = static_cast<double>(std::count(positive.begin(), positive.end(), true));
    const double n_neg = static_cast<double>(positive.size()) - n_pos;

    RocCurve curve{positive_class, {}};
    curve.points.push_back({idx.empty() ? 1.0 : scores[idx.front()] + 1.0, 0.0, 0.0});
    double tp = 0.0;
    double fp = 0.0;
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
            (positive[idx[j]] ? tp : fp) += 1.0;
            ++j;
        }
        curve.points.push_back({scores[idx[i]], n_neg > 0 ? fp / n_neg : 0.0, n_pos > 0 ? tp / n_pos : 0.0});
        i = j;
    }
    return curve;
}

}  // namespace voxtopo
