#include "aep/folds.hpp"

#include <algorithm>
#include <string>

#include "aep/error.hpp"
#include "aep/rng.hpp"

namespace aep {

std::vector<EventEpisode> find_event_episodes(const LabelVec& y) {
    std::vector<EventEpisode> out;
    const std::size_t n = y.size();
    std::size_t i = 0;
    while (i < n) {
        if (y[i]) {
            std::size_t j = i;
            while (j + 1 < n && y[j + 1]) ++j;
            out.push_back({static_cast<std::int32_t>(i + 1), static_cast<std::int32_t>(j + 1)});
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

const char* resample_mode_name(ResampleMode m) {
    switch (m) {
        case ResampleMode::none: return "none";
        case ResampleMode::undersample: return "undersample";
        case ResampleMode::oversample: return "oversample";
    }
    return "?";
}

namespace {

/// Fills the fold's pattern tick sets from its raw range.
void materialize_fold(Fold& fold, const PatternSet& patterns) {
    const std::int32_t first_pattern_tick = static_cast<std::int32_t>(patterns.tau) + 1;
    for (std::int32_t t = std::max(fold.lo, first_pattern_tick); t <= fold.hi; ++t) {
        fold.ticks.push_back(t);
        if (patterns.series_y[t - 1] == 0) fold.ticks_no_event.push_back(t);
    }
}

} // namespace

FoldSet sample_blocks(const PatternSet& patterns, std::size_t beta) {
    if (beta < 1) fail(Errc::beta_non_positive, "block length beta must be >= 1");
    if (patterns.series_warning.empty())
        fail(Errc::shape_mismatch, "sample_blocks requires attached warning labels");

    const auto episodes = find_event_episodes(patterns.series_y);
    if (episodes.empty()) fail(Errc::no_events, "series contains no event episode");

    const std::int32_t n = static_cast<std::int32_t>(patterns.n_ticks);
    const auto& w = patterns.series_warning;

    // Anchors: final tick of each maximal warning run. Because warning labels
    // cover events, every anchor is an episode end; episodes followed by
    // another event within omega merge into that event's run and get none.
    std::vector<std::int32_t> anchors;
    for (std::int32_t t = 1; t <= n; ++t)
        if (w[t - 1] == 1 && (t == n || w[t] == 0)) anchors.push_back(t);

    FoldSet out;
    out.strategy = FoldStrategy::blocks;
    for (const auto& episode : episodes) {
        const bool anchored = std::binary_search(anchors.begin(), anchors.end(), episode.end);
        if (!anchored)
            out.warnings.push_back("event ending at tick " + std::to_string(episode.end) +
                                   " discarded: another event begins within omega ticks");
    }

    std::int32_t previous_hi = 0;
    for (std::int32_t anchor : anchors) {
        Fold fold;
        fold.anchor = anchor;
        fold.hi = anchor;
        fold.lo = anchor - static_cast<std::int32_t>(beta);
        if (fold.lo < 1) {
            fold.lo = 1;
            fold.truncated = true;
        }
        if (fold.lo <= previous_hi) {
            out.warnings.push_back("event ending at tick " + std::to_string(anchor) +
                                   " discarded: its block would overlap the previous block");
            continue;
        }
        // The block may not reach into any other episode; each fold holds
        // exactly one event.
        bool foreign = false;
        for (const auto& episode : episodes) {
            if (episode.end == anchor) continue;
            if (episode.start <= fold.hi && episode.end >= fold.lo) {
                foreign = true;
                break;
            }
        }
        if (foreign) {
            out.warnings.push_back("event ending at tick " + std::to_string(anchor) +
                                   " discarded: its block would contain another event");
            continue;
        }
        if (fold.truncated)
            out.warnings.push_back("block for event ending at tick " + std::to_string(anchor) +
                                   " truncated at the series start");
        materialize_fold(fold, patterns);
        previous_hi = fold.hi;
        out.folds.push_back(std::move(fold));
    }

    if (out.folds.empty())
        fail(Errc::no_events, "no event block could be retained");
    return out;
}

FoldSet partition_folds(const PatternSet& patterns, std::size_t k) {
    const std::size_t n = patterns.size();
    if (k < 2) fail(Errc::k_too_large, "partitioning needs k >= 2");
    if (k > n)
        fail(Errc::k_too_large, "cannot split " + std::to_string(n) + " patterns into " +
                                    std::to_string(k) + " folds");

    FoldSet out;
    out.strategy = FoldStrategy::partition;
    const std::size_t base = n / k;
    const std::size_t remainder = n % k;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t size = base + (i < remainder ? 1 : 0);
        Fold fold;
        fold.lo = patterns.ticks[offset];
        fold.hi = patterns.ticks[offset + size - 1];
        for (std::size_t r = offset; r < offset + size; ++r) {
            const std::int32_t t = patterns.ticks[r];
            fold.ticks.push_back(t);
            if (patterns.series_y[t - 1] == 0) fold.ticks_no_event.push_back(t);
        }
        out.folds.push_back(std::move(fold));
        offset += size;
    }
    return out;
}

TrainTestView training_view(const FoldSet& folds, std::size_t held_out, bool include_event) {
    if (held_out >= folds.k())
        fail(Errc::bad_fold_index, "fold index " + std::to_string(held_out) + " out of range");
    TrainTestView view;
    view.test_ticks = folds.folds[held_out].ticks_no_event;
    for (std::size_t j = 0; j < folds.k(); ++j) {
        if (j == held_out) continue;
        const auto& source = include_event ? folds.folds[j].ticks : folds.folds[j].ticks_no_event;
        view.train_ticks.insert(view.train_ticks.end(), source.begin(), source.end());
    }
    return view;
}

std::vector<std::int32_t> resample_training(const std::vector<std::int32_t>& train_ticks,
                                            const PatternSet& patterns,
                                            const ResampleSpec& spec) {
    if (spec.mode == ResampleMode::none) return train_ticks;

    std::vector<std::int32_t> positives, negatives;
    for (std::int32_t t : train_ticks) {
        const auto row = patterns.row_of_tick(t);
        if (!row) fail(Errc::bad_fold_index, "tick " + std::to_string(t) + " has no pattern");
        (patterns.warning_labels[*row] ? positives : negatives).push_back(t);
    }
    if (positives.empty() || negatives.empty())
        fail(Errc::single_class_training, "resampling needs both classes in the training set");

    // Majority defaults to the negative class on a tie.
    const bool positives_majority = positives.size() > negatives.size();
    auto& majority = positives_majority ? positives : negatives;
    auto& minority = positives_majority ? negatives : positives;

    Rng rng(spec.seed);
    std::vector<std::int32_t> out;
    if (spec.mode == ResampleMode::undersample) {
        out.reserve(2 * minority.size());
        if (spec.with_replacement) {
            for (std::size_t i = 0; i < minority.size(); ++i)
                out.push_back(majority[rng.index(majority.size())]);
        } else {
            // Partial Fisher-Yates draw of |minority| distinct elements.
            std::vector<std::int32_t> pool = majority;
            for (std::size_t i = 0; i < minority.size(); ++i) {
                const std::size_t j = i + rng.index(pool.size() - i);
                std::swap(pool[i], pool[j]);
                out.push_back(pool[i]);
            }
        }
        out.insert(out.end(), minority.begin(), minority.end());
    } else {
        out.reserve(2 * majority.size());
        out.insert(out.end(), majority.begin(), majority.end());
        for (std::size_t i = 0; i < majority.size(); ++i)
            out.push_back(minority[rng.index(minority.size())]);
    }

    return out;
}

} // namespace aep
