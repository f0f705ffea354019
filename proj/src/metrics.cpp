#include "aep/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "aep/error.hpp"

namespace aep {

ConfusionCounts confusion(const LabelVec& predicted, const LabelVec& truth) {
    if (predicted.size() != truth.size())
        fail(Errc::shape_mismatch, "prediction and truth lengths differ");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i]) {
            if (predicted[i]) ++c.tp;
            else ++c.fn;
        } else {
            if (predicted[i]) ++c.fp;
            else ++c.tn;
        }
    }
    return c;
}

double balanced_accuracy(const ConfusionCounts& c) {
    if (c.positives() == 0) fail(Errc::empty_class, "no positive test patterns");
    if (c.negatives() == 0) fail(Errc::empty_class, "no negative test patterns");
    const double sensitivity = static_cast<double>(c.tp) / static_cast<double>(c.positives());
    const double specificity = static_cast<double>(c.tn) / static_cast<double>(c.negatives());
    return 0.5 * (sensitivity + specificity);
}

double raw_accuracy(const ConfusionCounts& c) {
    if (c.total() == 0) fail(Errc::empty_class, "no test patterns");
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double roc_auc(const std::vector<double>& scores, const LabelVec& labels) {
    if (scores.size() != labels.size())
        fail(Errc::shape_mismatch, "score and label lengths differ");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (std::uint8_t v : labels) n_pos += v;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) fail(Errc::empty_class, "roc_auc needs both classes");

    // Mann-Whitney form with midranks for ties; identical to trapezoidal
    // integration of the ROC curve.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return a < b;
    });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k)
            if (labels[order[k]]) rank_sum_pos += midrank;
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

const char* metric_name(MetricKind m) {
    switch (m) {
        case MetricKind::balanced_accuracy: return "balanced_accuracy";
        case MetricKind::raw_accuracy: return "raw_accuracy";
    }
    return "?";
}

double evaluate_metric(MetricKind m, const ConfusionCounts& c) {
    return m == MetricKind::balanced_accuracy ? balanced_accuracy(c) : raw_accuracy(c);
}

} // namespace aep
