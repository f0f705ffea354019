#ifndef AEP_EVALUATE_HPP
#define AEP_EVALUATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aep/classifiers.hpp"
#include "aep/folds.hpp"
#include "aep/metrics.hpp"
#include "aep/timeseries.hpp"

namespace aep {

enum class ScalerPolicy { minmax, none };

const char* scaler_policy_name(ScalerPolicy p);

/// Options shared by the CV protocols. Seeds for per-fold work are derived
/// from the classifier seed and the resample seed, so reruns and any worker
/// count produce identical results.
struct CvOptions {
    bool include_event = true;
    ResampleSpec resample;
    ScalerPolicy scaler = ScalerPolicy::minmax;
    double threshold = 0.5;
    MetricKind metric = MetricKind::balanced_accuracy;
    bool auc_diagnostic = false;
    bool keep_traces = false; // per-pattern probabilities + audit index lists
    int workers = 1;
};

struct FoldRecord {
    std::size_t fold = 0;
    bool skipped = false;
    std::string skip_reason;
    std::size_t n_train = 0; // after resampling
    std::size_t n_test = 0;
    ConfusionCounts counts;
    double score = 0.0;
    std::optional<double> auc;
    std::uint64_t fit_seed = 0;
    std::uint64_t resample_seed = 0;
    double seconds = 0.0; // wall clock; excluded from canonical report bytes
    // populated when keep_traces
    std::vector<std::int32_t> test_ticks;
    std::vector<double> probabilities;
    std::vector<std::int32_t> train_ticks_used; // post-resampling multiset
    LabelVec test_labels;
};

/// Per-fold results plus the aggregate over non-skipped folds. The snapshot
/// of the configuration that produced a report is attached by the caller
/// when serializing (see report_io).
struct ExperimentReport {
    std::string classifier;
    std::vector<FoldRecord> folds;
    double mean_score = 0.0;
    std::optional<double> mean_auc;
    std::size_t n_used = 0;
    std::size_t n_skipped = 0;
    std::vector<std::string> warnings;
    double total_seconds = 0.0;
};

/// Modified k-fold CV: for each fold, fit the scaler on the training view,
/// scale train and test, resample the training set only, train, and score on
/// T_i' (event patterns removed). Folds whose test set lacks a class are
/// skipped with a reason; the mean is over the non-skipped folds. Throws
/// all_folds_skipped when nothing is usable.
ExperimentReport cross_validate(const PatternSet& patterns, const FoldSet& folds,
                                const ClassifierSpec& spec, const CvOptions& options);

/// Ordered hyperparameter grid; combination order is declaration order and
/// matters because tied inner scores resolve to the later combination.
struct HyperGrid {
    Family family = Family::gnb;
    std::vector<ParamMap> combos;
    std::uint64_t seed = 0;
};

/// Named presets of the published experiment grids (svm, gnb, brf, adaboost).
HyperGrid grid_preset(const std::string& name, std::size_t n_pattern_columns);
std::vector<std::string> grid_preset_names();

struct GridFoldRecord {
    std::size_t fold = 0;
    bool skipped = false;
    std::string skip_reason;
    std::size_t chosen_lambda = 0;     // index into HyperGrid::combos
    double inner_score = 0.0;          // best inner CV mean
    std::vector<double> inner_scores;  // per combination, audit trail
    double outer_score = 0.0;
    ConfusionCounts counts;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double seconds = 0.0;
};

struct GridSearchResult {
    Family family = Family::gnb;
    std::vector<GridFoldRecord> folds;
    double mean_outer_score = 0.0;
    std::size_t n_used = 0;
    std::size_t n_skipped = 0;
    std::vector<std::string> warnings;
    double total_seconds = 0.0;
};

/// Nested (k-1)-fold grid search inside k-fold CV. For each outer fold the
/// inner CV reuses the k-1 training folds; the combination with the highest
/// inner mean wins, later combinations winning ties. Model selection always
/// uses balanced accuracy. Requires k >= 3.
GridSearchResult nested_grid_search(const PatternSet& patterns, const FoldSet& folds,
                                    const HyperGrid& grid, const CvOptions& options);

/// Fold-strategy comparison protocol: the series is partitioned into k
/// chronological folds (k = event count); per iteration, classifiers are
/// trained (a) on the entire k-1 training folds and (b) on blocks sampled
/// from within them, both tested on the held-out fold with event patterns
/// removed. Iterations whose test fold contains no event are excluded.
struct CompareFoldsOptions {
    std::size_t tau = 0;
    std::size_t omega = 1;
    std::size_t beta = 1;
    std::vector<ClassifierSpec> specs;
    bool run_event_excluded = true; // EE variant
    bool run_event_included = true; // EI variant
    ResampleSpec resample;
    ScalerPolicy scaler = ScalerPolicy::minmax;
    double threshold = 0.5;
    MetricKind metric = MetricKind::balanced_accuracy;
    int workers = 1;
};

struct CompareCellRecord {
    bool evaluated = false;
    double score = 0.0;
    std::size_t n_train = 0;
};

struct CompareIterationRecord {
    std::size_t fold = 0;
    bool skipped = false;
    std::string skip_reason;
    // [strategy: 0 = full folds, 1 = sampled blocks][variant: 0 = EE, 1 = EI][classifier]
    std::vector<CompareCellRecord> cells[2][2];
};

struct CompareFoldsReport {
    std::vector<std::string> classifier_names;
    std::vector<CompareIterationRecord> iterations;
    // means over non-skipped iterations, same indexing as cells
    std::vector<double> mean_scores[2][2];
    double row_average[2][2] = {{0.0, 0.0}, {0.0, 0.0}}; // mean across classifiers
    std::size_t n_used = 0;
    std::size_t n_skipped = 0;
    std::vector<std::string> warnings;
    double total_seconds = 0.0;
};

CompareFoldsReport compare_fold_strategies(const TimeSeries& series,
                                           const CompareFoldsOptions& options);

} // namespace aep

#endif
