#ifndef AEP_FOLDS_HPP
#define AEP_FOLDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aep/timeseries.hpp"

namespace aep {

/// Maximal run of consecutive y_t = 1 ticks, inclusive 1-based bounds.
struct EventEpisode {
    std::int32_t start = 0;
    std::int32_t end = 0;
};

std::vector<EventEpisode> find_event_episodes(const LabelVec& y);

enum class FoldStrategy { blocks, partition };

/// One CV fold. For the blocks strategy, [lo, hi] is the raw tick range of
/// the block and `anchor` its event's final tick (hi == anchor). `ticks`
/// holds the fold's pattern ticks T_i (the raw range intersected with ticks
/// that have a full lag history) and `ticks_no_event` the subset T_i' with
/// y_t = 0, which is the only set ever used for testing.
struct Fold {
    std::int32_t lo = 0;
    std::int32_t hi = 0;
    std::int32_t anchor = 0;
    bool truncated = false;
    std::vector<std::int32_t> ticks;
    std::vector<std::int32_t> ticks_no_event;
};

struct FoldSet {
    FoldStrategy strategy = FoldStrategy::blocks;
    std::vector<Fold> folds;
    std::vector<std::string> warnings; // overlap discards, truncations

    std::size_t k() const { return folds.size(); }
};

/// Builds one block fold per retained event. Anchors are the final ticks of
/// maximal warning-label runs (warning = 1 and next tick's warning = 0, or
/// series end), which coincide with event episode ends. A candidate block
/// {t-beta, ..., t} is retained only if it does not overlap a previously
/// retained block and does not contain ticks of any other event episode;
/// otherwise its event is discarded with a warning. Blocks reaching before
/// tick 1 are truncated with a warning. Requires attached warning labels.
FoldSet sample_blocks(const PatternSet& patterns, std::size_t beta);

/// Chronological partition of the pattern rows into k folds of near-equal
/// size (remainder to the earliest folds), no shuffling. 2 <= k <= n.
FoldSet partition_folds(const PatternSet& patterns, std::size_t k);

/// Train/test index split for one CV iteration. Test is always T_i' (event
/// patterns removed); training folds contribute T_j when include_event,
/// else T_j'.
struct TrainTestView {
    std::vector<std::int32_t> train_ticks;
    std::vector<std::int32_t> test_ticks;
};

TrainTestView training_view(const FoldSet& folds, std::size_t held_out, bool include_event);

enum class ResampleMode { none, undersample, oversample };

const char* resample_mode_name(ResampleMode m);

/// Training-set resampling per the class-cardinality rules: undersampling
/// draws a majority-class sample of minority cardinality, oversampling a
/// minority-class sample of majority cardinality; the other class is kept
/// whole. Draws are with replacement by default; `with_replacement = false`
/// switches undersampling to a without-replacement draw.
struct ResampleSpec {
    ResampleMode mode = ResampleMode::none;
    std::uint64_t seed = 0;
    bool with_replacement = true;
};

/// Resamples a training tick list. Class membership is taken from the
/// patterns' warning labels. Output order: majority part first, then
/// minority part; the kept-whole class preserves input order. The seed fully
/// determines the result.
std::vector<std::int32_t> resample_training(const std::vector<std::int32_t>& train_ticks,
                                            const PatternSet& patterns,
                                            const ResampleSpec& spec);

} // namespace aep

#endif
