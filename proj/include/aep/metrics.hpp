#ifndef AEP_METRICS_HPP
#define AEP_METRICS_HPP

#include <cstddef>
#include <vector>

#include "aep/timeseries.hpp"

namespace aep {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    std::size_t positives() const { return tp + fn; }
    std::size_t negatives() const { return tn + fp; }
};

ConfusionCounts confusion(const LabelVec& predicted, const LabelVec& truth);

/// (sensitivity + specificity) / 2. Throws empty_class when a class has no
/// test members.
double balanced_accuracy(const ConfusionCounts& c);

/// Plain fraction correct (kept as a config switch; not the default metric).
double raw_accuracy(const ConfusionCounts& c);

/// Probability that a random positive outranks a random negative, ties
/// counted half (equals trapezoidal ROC integration). Optional diagnostic
/// only; never drives model selection. Throws empty_class.
double roc_auc(const std::vector<double>& scores, const LabelVec& labels);

enum class MetricKind { balanced_accuracy, raw_accuracy };

const char* metric_name(MetricKind m);

double evaluate_metric(MetricKind m, const ConfusionCounts& c);

} // namespace aep

#endif
