#include "aep/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "aep/error.hpp"
#include "aep/parallel.hpp"
#include "aep/rng.hpp"

namespace aep {

const char* scaler_policy_name(ScalerPolicy p) {
    return p == ScalerPolicy::minmax ? "minmax" : "none";
}

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct FoldOutcome {
    bool usable = false;
    std::string reason;
    ConfusionCounts counts;
    double score = 0.0;
    std::optional<double> auc;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double seconds = 0.0;
    std::vector<double> probabilities;
    std::vector<std::int32_t> train_ticks_used;
    LabelVec test_labels;
};

/// Both warning-label classes present among the given pattern ticks?
bool has_both_classes(const PatternSet& patterns, const std::vector<std::int32_t>& ticks) {
    bool seen[2] = {false, false};
    for (std::int32_t t : ticks) {
        const auto row = patterns.row_of_tick(t);
        if (!row) continue;
        seen[patterns.warning_labels[*row]] = true;
        if (seen[0] && seen[1]) return true;
    }
    return false;
}

Matrix gather_ticks(const PatternSet& patterns, const std::vector<std::int32_t>& ticks,
                    LabelVec* labels_out) {
    std::vector<std::size_t> rows;
    rows.reserve(ticks.size());
    for (std::int32_t t : ticks) {
        const auto row = patterns.row_of_tick(t);
        if (!row) fail(Errc::bad_fold_index, "tick " + std::to_string(t) + " has no pattern");
        rows.push_back(*row);
    }
    if (labels_out) {
        labels_out->clear();
        labels_out->reserve(rows.size());
        for (std::size_t r : rows) labels_out->push_back(patterns.warning_labels[r]);
    }
    return patterns.X.gather(rows);
}

/// One train/score pass: scale (fit on the training view), resample the
/// training set only, fit, and evaluate on the test ticks.
FoldOutcome run_single_fold(const PatternSet& patterns, const std::vector<std::int32_t>& train_ticks,
                            const std::vector<std::int32_t>& test_ticks, const ClassifierSpec& spec,
                            const CvOptions& options, std::uint64_t fit_seed,
                            std::uint64_t resample_seed) {
    FoldOutcome out;
    const double t0 = now_seconds();

    if (test_ticks.empty()) {
        out.reason = "test fold has no patterns";
        return out;
    }
    if (!has_both_classes(patterns, test_ticks)) {
        out.reason = "test fold lacks a warning-label class";
        return out;
    }
    if (train_ticks.empty()) {
        out.reason = "training set has no patterns";
        return out;
    }
    if (!has_both_classes(patterns, train_ticks)) {
        out.reason = "training set lacks a warning-label class";
        return out;
    }

    LabelVec train_labels, test_labels;
    Matrix train_x = gather_ticks(patterns, train_ticks, &train_labels);
    Matrix test_x = gather_ticks(patterns, test_ticks, &test_labels);

    MinMaxScaler scaler;
    if (options.scaler == ScalerPolicy::minmax) {
        scaler.fit(train_x);
        scaler.transform(train_x);
        scaler.transform(test_x);
    }

    ResampleSpec resample = options.resample;
    resample.seed = resample_seed;
    const std::vector<std::int32_t> final_ticks =
        resample_training(train_ticks, patterns, resample);

    Matrix fit_x;
    LabelVec fit_y;
    if (resample.mode == ResampleMode::none) {
        fit_x = std::move(train_x);
        fit_y = std::move(train_labels);
    } else {
        std::unordered_map<std::int32_t, std::size_t> row_of;
        row_of.reserve(train_ticks.size());
        for (std::size_t i = 0; i < train_ticks.size(); ++i) row_of[train_ticks[i]] = i;
        std::vector<std::size_t> rows;
        rows.reserve(final_ticks.size());
        for (std::int32_t t : final_ticks) rows.push_back(row_of.at(t));
        fit_x = train_x.gather(rows);
        fit_y.reserve(rows.size());
        for (std::size_t r : rows) fit_y.push_back(train_labels[r]);
    }

    ClassifierSpec seeded = spec;
    seeded.seed = fit_seed;
    const TrainedModel model = fit(seeded, fit_x, fit_y);

    const std::vector<double> probs = model.predict_proba(test_x);
    const LabelVec predicted = labels_from_probabilities(probs, options.threshold);
    out.counts = confusion(predicted, test_labels);
    out.score = evaluate_metric(options.metric, out.counts);
    if (options.auc_diagnostic) out.auc = roc_auc(probs, test_labels);

    out.usable = true;
    out.n_train = fit_x.rows;
    out.n_test = test_x.rows;
    if (options.keep_traces) {
        out.probabilities = probs;
        out.train_ticks_used = final_ticks;
        out.test_labels = test_labels;
    }
    out.seconds = now_seconds() - t0;
    return out;
}

void require_warning_labels(const PatternSet& patterns) {
    if (patterns.warning_labels.empty())
        fail(Errc::shape_mismatch, "pattern set has no warning labels attached");
}

} // namespace

ExperimentReport cross_validate(const PatternSet& patterns, const FoldSet& folds,
                                const ClassifierSpec& spec, const CvOptions& options) {
    require_warning_labels(patterns);
    validate_spec(spec);
    const std::size_t k = folds.k();
    if (k < 2) fail(Errc::k_too_small, "cross validation needs k >= 2 folds");

    const double t0 = now_seconds();
    std::vector<FoldOutcome> outcomes(k);
    parallel_for(k, options.workers, [&](std::size_t i) {
        const TrainTestView view = training_view(folds, i, options.include_event);
        outcomes[i] = run_single_fold(patterns, view.train_ticks, view.test_ticks, spec, options,
                                      derive_seed(spec.seed, {seed_tag::fit, i}),
                                      derive_seed(options.resample.seed, {seed_tag::resample, i}));
    });

    ExperimentReport report;
    report.classifier = family_name(spec.family);
    report.warnings = folds.warnings;
    double sum = 0.0, auc_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        FoldRecord record;
        record.fold = i;
        record.fit_seed = derive_seed(spec.seed, {seed_tag::fit, i});
        record.resample_seed = derive_seed(options.resample.seed, {seed_tag::resample, i});
        auto& oc = outcomes[i];
        if (!oc.usable) {
            record.skipped = true;
            record.skip_reason = oc.reason;
            ++report.n_skipped;
        } else {
            record.counts = oc.counts;
            record.score = oc.score;
            record.auc = oc.auc;
            record.n_train = oc.n_train;
            record.n_test = oc.n_test;
            record.seconds = oc.seconds;
            record.test_ticks = folds.folds[i].ticks_no_event;
            record.probabilities = std::move(oc.probabilities);
            record.train_ticks_used = std::move(oc.train_ticks_used);
            record.test_labels = std::move(oc.test_labels);
            sum += record.score;
            if (record.auc) auc_sum += *record.auc;
            ++report.n_used;
        }
        report.folds.push_back(std::move(record));
    }
    if (report.n_used == 0)
        fail(Errc::all_folds_skipped, "every fold was skipped; nothing to average");
    report.mean_score = sum / static_cast<double>(report.n_used);
    if (options.auc_diagnostic) report.mean_auc = auc_sum / static_cast<double>(report.n_used);
    report.total_seconds = now_seconds() - t0;
    return report;
}

GridSearchResult nested_grid_search(const PatternSet& patterns, const FoldSet& folds,
                                    const HyperGrid& grid, const CvOptions& options) {
    require_warning_labels(patterns);
    const std::size_t k = folds.k();
    if (k < 3) fail(Errc::k_too_small, "nested grid search needs k >= 3 folds");
    if (grid.combos.empty()) fail(Errc::invalid_hyperparameter, "empty hyperparameter grid");

    std::vector<ClassifierSpec> specs;
    specs.reserve(grid.combos.size());
    for (const auto& combo : grid.combos) {
        ClassifierSpec spec;
        spec.family = grid.family;
        spec.params = combo;
        spec.seed = grid.seed;
        validate_spec(spec);
        specs.push_back(std::move(spec));
    }
    const std::size_t n_lambda = specs.size();

    const double t0 = now_seconds();

    // Inner CV training sets reuse the outer folds: testing on T_j', training
    // on every other training fold's F_m.
    auto inner_train_ticks = [&](std::size_t outer, std::size_t inner) {
        std::vector<std::int32_t> ticks;
        for (std::size_t m = 0; m < k; ++m) {
            if (m == outer || m == inner) continue;
            const auto& f = folds.folds[m];
            const auto& source = options.include_event ? f.ticks : f.ticks_no_event;
            ticks.insert(ticks.end(), source.begin(), source.end());
        }
        return ticks;
    };

    // (outer, lambda) tasks; each runs its inner folds sequentially in index
    // order so sums are reproducible.
    std::vector<std::vector<double>> inner_means(k, std::vector<double>(n_lambda, 0.0));
    std::vector<std::vector<bool>> inner_valid(k, std::vector<bool>(n_lambda, false));
    struct Task {
        std::size_t outer;
        std::size_t lambda;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < n_lambda; ++l) tasks.push_back({i, l});

    parallel_for(tasks.size(), options.workers, [&](std::size_t task_id) {
        const auto [i, l] = tasks[task_id];
        double sum = 0.0;
        std::size_t used = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            const FoldOutcome oc = run_single_fold(
                patterns, inner_train_ticks(i, j), folds.folds[j].ticks_no_event, specs[l], options,
                derive_seed(grid.seed, {seed_tag::inner_fit, i, l, j}),
                derive_seed(options.resample.seed, {seed_tag::inner_resample, i, l, j}));
            if (oc.usable) {
                sum += oc.score;
                ++used;
            }
        }
        if (used > 0) {
            inner_means[i][l] = sum / static_cast<double>(used);
            inner_valid[i][l] = true;
        }
    });

    GridSearchResult result;
    result.family = grid.family;
    result.warnings = folds.warnings;

    // Selection: scan combinations in declaration order, >= keeps later ties.
    std::vector<std::size_t> chosen(k, 0);
    std::vector<bool> outer_usable(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (std::size_t l = 0; l < n_lambda; ++l) {
            if (!inner_valid[i][l]) continue;
            if (inner_means[i][l] >= best) {
                best = inner_means[i][l];
                chosen[i] = l;
                any = true;
            }
        }
        outer_usable[i] = any;
    }

    std::vector<FoldOutcome> outer(k);
    parallel_for(k, options.workers, [&](std::size_t i) {
        if (!outer_usable[i]) return;
        const TrainTestView view = training_view(folds, i, options.include_event);
        outer[i] = run_single_fold(patterns, view.train_ticks, view.test_ticks, specs[chosen[i]],
                                   options, derive_seed(grid.seed, {seed_tag::fit, i}),
                                   derive_seed(options.resample.seed, {seed_tag::resample, i}));
    });

    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        GridFoldRecord record;
        record.fold = i;
        record.inner_scores.assign(n_lambda, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t l = 0; l < n_lambda; ++l)
            if (inner_valid[i][l]) record.inner_scores[l] = inner_means[i][l];
        if (!outer_usable[i]) {
            record.skipped = true;
            record.skip_reason = "no usable inner fold";
            ++result.n_skipped;
        } else if (!outer[i].usable) {
            record.skipped = true;
            record.skip_reason = outer[i].reason;
            record.chosen_lambda = chosen[i];
            record.inner_score = inner_means[i][chosen[i]];
            ++result.n_skipped;
        } else {
            record.chosen_lambda = chosen[i];
            record.inner_score = inner_means[i][chosen[i]];
            record.outer_score = outer[i].score;
            record.counts = outer[i].counts;
            record.n_train = outer[i].n_train;
            record.n_test = outer[i].n_test;
            record.seconds = outer[i].seconds;
            sum += record.outer_score;
            ++result.n_used;
        }
        result.folds.push_back(std::move(record));
    }
    if (result.n_used == 0)
        fail(Errc::all_folds_skipped, "every outer fold was skipped");
    result.mean_outer_score = sum / static_cast<double>(result.n_used);
    result.total_seconds = now_seconds() - t0;
    return result;
}

namespace {

std::vector<double> log_spaced(double exp_lo, double exp_hi, std::size_t count) {
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double e = exp_lo + (exp_hi - exp_lo) * static_cast<double>(i) /
                                      static_cast<double>(count - 1);
        out.push_back(std::pow(10.0, e));
    }
    return out;
}

} // namespace

HyperGrid grid_preset(const std::string& name, std::size_t n_pattern_columns) {
    HyperGrid grid;
    if (name == "svm" || name == "svm_rbf") {
        grid.family = Family::svm_rbf;
        std::vector<double> gammas{1.0 / static_cast<double>(n_pattern_columns)};
        for (int n = -6; n <= 2; ++n) gammas.push_back(std::pow(10.0, n));
        for (int cn = -6; cn <= 3; ++cn)
            for (double g : gammas) {
                ParamMap combo;
                combo["C"] = std::pow(10.0, cn);
                combo["gamma"] = g;
                grid.combos.push_back(std::move(combo));
            }
    } else if (name == "gnb") {
        grid.family = Family::gnb;
        for (double v : log_spaced(-15.0, 0.0, 100)) {
            ParamMap combo;
            combo["var_smoothing"] = v;
            grid.combos.push_back(std::move(combo));
        }
    } else if (name == "brf") {
        grid.family = Family::brf;
        for (double trees : {10, 25, 50, 100, 200, 300, 400, 500, 750, 1000})
            for (double mf : {2, 4, 8, 16, 32})
                for (const char* strategy : {"under", "over"}) {
                    ParamMap combo;
                    combo["n_estimators"] = trees;
                    combo["max_features"] = mf;
                    combo["sampling_strategy"] = std::string(strategy);
                    grid.combos.push_back(std::move(combo));
                }
    } else if (name == "adaboost") {
        grid.family = Family::adaboost;
        for (double est : {10, 20, 30, 40, 50, 75, 100, 150, 200, 500, 1000, 2000})
            for (int rn = -7; rn <= 0; ++rn) {
                ParamMap combo;
                combo["n_estimators"] = est;
                combo["learning_rate"] = std::pow(10.0, rn);
                grid.combos.push_back(std::move(combo));
            }
    } else {
        fail(Errc::invalid_hyperparameter, "unknown grid preset '" + name + "'");
    }
    return grid;
}

std::vector<std::string> grid_preset_names() { return {"svm", "gnb", "brf", "adaboost"}; }

CompareFoldsReport compare_fold_strategies(const TimeSeries& series,
                                           const CompareFoldsOptions& options) {
    if (options.specs.empty())
        fail(Errc::invalid_hyperparameter, "compare_fold_strategies needs classifiers");
    for (const auto& spec : options.specs) validate_spec(spec);
    if (!options.run_event_excluded && !options.run_event_included)
        fail(Errc::invalid_hyperparameter, "at least one of the EE/EI variants must run");

    const PatternSet patterns = build_pattern_set(series, options.tau, options.omega);
    const auto episodes = find_event_episodes(patterns.series_y);
    if (episodes.size() < 2)
        fail(Errc::no_events, "fold-strategy comparison needs at least two events");
    const std::size_t k = episodes.size();
    const FoldSet partition = partition_folds(patterns, k);

    CvOptions cv;
    cv.resample = options.resample;
    cv.scaler = options.scaler;
    cv.threshold = options.threshold;
    cv.metric = options.metric;
    cv.workers = 1; // parallelism lives at the task level below

    const double t0 = now_seconds();

    CompareFoldsReport report;
    for (const auto& spec : options.specs)
        report.classifier_names.push_back(family_name(spec.family));

    const std::size_t n_classifiers = options.specs.size();
    report.iterations.resize(k);

    // Per iteration: candidate blocks drawn over the whole series, keeping
    // only those that stay clear of the test fold.
    auto blocks_for_iteration = [&](std::size_t test_fold) {
        const auto& test = partition.folds[test_fold];
        std::vector<std::int32_t> anchors;
        const std::int32_t n = static_cast<std::int32_t>(patterns.n_ticks);
        for (std::int32_t t = 1; t <= n; ++t)
            if (patterns.series_warning[t - 1] == 1 && (t == n || patterns.series_warning[t] == 0))
                anchors.push_back(t);
        std::vector<std::pair<std::int32_t, std::int32_t>> ranges;
        std::int32_t previous_hi = 0;
        for (std::int32_t anchor : anchors) {
            std::int32_t lo = std::max(1, anchor - static_cast<std::int32_t>(options.beta));
            if (lo <= previous_hi) continue;
            if (lo <= test.hi && anchor >= test.lo) continue; // visible from test fold
            bool foreign = false;
            for (const auto& episode : episodes) {
                if (episode.end == anchor) continue;
                if (episode.start <= anchor && episode.end >= lo) {
                    foreign = true;
                    break;
                }
            }
            if (foreign) continue;
            ranges.emplace_back(lo, anchor);
            previous_hi = anchor;
        }
        return ranges;
    };

    struct Cell {
        std::size_t iteration;
        int strategy; // 0 full folds, 1 sampled blocks
        int variant;  // 0 EE, 1 EI
        std::size_t classifier;
    };
    std::vector<Cell> cells;
    std::vector<int> variants;
    if (options.run_event_excluded) variants.push_back(0);
    if (options.run_event_included) variants.push_back(1);

    std::vector<bool> skipped(k, false);
    std::vector<std::string> skip_reason(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& fold = partition.folds[i];
        bool has_event = false;
        for (std::int32_t t : fold.ticks)
            if (patterns.series_y[t - 1]) {
                has_event = true;
                break;
            }
        if (!has_event) {
            skipped[i] = true;
            skip_reason[i] = "test fold contains no event";
        } else if (!has_both_classes(patterns, fold.ticks_no_event)) {
            skipped[i] = true;
            skip_reason[i] = "test fold lacks a warning-label class";
        }
        auto& record = report.iterations[i];
        record.fold = i;
        record.skipped = skipped[i];
        record.skip_reason = skip_reason[i];
        for (int s = 0; s < 2; ++s)
            for (int v = 0; v < 2; ++v) record.cells[s][v].resize(n_classifiers);
        if (skipped[i]) continue;
        for (int s = 0; s < 2; ++s)
            for (int v : variants)
                for (std::size_t c = 0; c < n_classifiers; ++c) cells.push_back({i, s, v, c});
    }

    parallel_for(cells.size(), options.workers, [&](std::size_t cell_id) {
        const Cell& cell = cells[cell_id];
        const bool include_event = cell.variant == 1;
        const auto& test_fold = partition.folds[cell.iteration];

        std::vector<std::int32_t> train_ticks;
        if (cell.strategy == 0) {
            TrainTestView view = training_view(partition, cell.iteration, include_event);
            train_ticks = std::move(view.train_ticks);
        } else {
            for (const auto& [lo, hi] : blocks_for_iteration(cell.iteration)) {
                const std::int32_t first = std::max(lo, static_cast<std::int32_t>(patterns.tau) + 1);
                for (std::int32_t t = first; t <= hi; ++t) {
                    if (!include_event && patterns.series_y[t - 1]) continue;
                    train_ticks.push_back(t);
                }
            }
        }

        const FoldOutcome oc = run_single_fold(
            patterns, train_ticks, test_fold.ticks_no_event, options.specs[cell.classifier], cv,
            derive_seed(options.specs[cell.classifier].seed,
                        {seed_tag::fit, cell.iteration, static_cast<std::uint64_t>(cell.strategy),
                         static_cast<std::uint64_t>(cell.variant)}),
            derive_seed(options.resample.seed,
                        {seed_tag::resample, cell.iteration, static_cast<std::uint64_t>(cell.strategy),
                         static_cast<std::uint64_t>(cell.variant)}));
        auto& slot = report.iterations[cell.iteration].cells[cell.strategy][cell.variant][cell.classifier];
        if (oc.usable) {
            slot.evaluated = true;
            slot.score = oc.score;
            slot.n_train = oc.n_train;
        }
    });

    for (std::size_t i = 0; i < k; ++i)
        if (skipped[i]) ++report.n_skipped;
        else ++report.n_used;
    if (report.n_used == 0) fail(Errc::all_folds_skipped, "every comparison iteration was skipped");

    for (int s = 0; s < 2; ++s)
        for (int v = 0; v < 2; ++v) {
            report.mean_scores[s][v].assign(n_classifiers, 0.0);
            double row_sum = 0.0;
            std::size_t row_count = 0;
            for (std::size_t c = 0; c < n_classifiers; ++c) {
                double sum = 0.0;
                std::size_t count = 0;
                for (std::size_t i = 0; i < k; ++i) {
                    const auto& slot = report.iterations[i].cells[s][v][c];
                    if (slot.evaluated) {
                        sum += slot.score;
                        ++count;
                    }
                }
                report.mean_scores[s][v][c] = count ? sum / static_cast<double>(count) : 0.0;
                if (count) {
                    row_sum += report.mean_scores[s][v][c];
                    ++row_count;
                }
            }
            report.row_average[s][v] = row_count ? row_sum / static_cast<double>(row_count) : 0.0;
        }

    report.total_seconds = now_seconds() - t0;
    return report;
}

} // namespace aep
