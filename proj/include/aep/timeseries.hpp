#ifndef AEP_TIMESERIES_HPP
#define AEP_TIMESERIES_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aep/matrix.hpp"

namespace aep {

using LabelVec = std::vector<std::uint8_t>;

/// A uniformly sampled multivariate series with binary event labels.
/// Tick t runs 1..n_ticks(); row t-1 of `features` holds the d readings
/// observed at t. Missing readings are stored as NaN. The tick duration is
/// metadata only: all window lengths in the library are expressed in ticks.
struct TimeSeries {
    int tick_minutes = 60;
    std::vector<std::string> feature_names; // empty -> f1..fd on output
    Matrix features;                        // n_ticks x d
    LabelVec event_labels;                  // y, one per tick

    std::size_t n_ticks() const { return features.rows; }
    std::size_t dims() const { return features.cols; }

    static bool is_missing(double v) { return std::isnan(v); }

    /// Throws on violated invariants (length mismatch, non-finite readings,
    /// non-binary labels, empty series).
    void validate() const;
};

enum class ImputeStrategy { mean, forward_fill };

/// Replaces missing readings. `mean` uses the per-feature mean of the
/// non-missing values; `forward_fill` carries the previous reading forward.
TimeSeries impute_missing(const TimeSeries& series, ImputeStrategy strategy);

/// Warning labels over a label vector: out[t-1] = 1 iff some y[t'-1] = 1
/// with t' in {t, ..., min(t+omega-1, n)}. omega >= 1.
LabelVec build_warning_labels(const LabelVec& y, std::size_t omega);

/// Lagged patterns. Pattern row i corresponds to tick t = tau+1+i and holds
/// the readings of ticks t-tau .. t, flattened lag-major: column (j-1)*d + f
/// is feature f at tick t-tau+j-1, matching the column order of the pattern
/// matrix. Labels are carried per pattern; the full-series label vectors are
/// kept as well because fold construction works in tick space.
struct PatternSet {
    std::size_t tau = 0;
    std::size_t omega = 0; // 0 until warning labels are attached
    std::size_t d = 0;
    std::size_t n_ticks = 0;
    int tick_minutes = 60;

    Matrix X;                    // (n_ticks - tau) x d*(tau+1)
    std::vector<std::int32_t> ticks; // tick of each pattern row
    LabelVec warning_labels;     // per pattern; empty until attached
    LabelVec original_labels;    // y_t per pattern
    LabelVec series_y;           // full series event labels
    LabelVec series_warning;     // full series warning labels; empty until attached

    std::size_t size() const { return X.rows; }
    std::size_t columns() const { return d * (tau + 1); }

    /// Pattern row index for a tick, if the tick has a full lag history.
    std::optional<std::size_t> row_of_tick(std::int32_t t) const {
        if (t < static_cast<std::int32_t>(tau) + 1 || t > static_cast<std::int32_t>(n_ticks))
            return std::nullopt;
        return static_cast<std::size_t>(t) - tau - 1;
    }
};

/// Builds the lagged pattern matrix for 0 <= tau < n_ticks. The first tau
/// ticks have no full lag history and produce no pattern. Warning labels are
/// not attached.
PatternSet build_patterns(const TimeSeries& series, std::size_t tau);

/// Computes series warning labels with the given omega and attaches them to
/// the pattern set (per pattern and full series).
void attach_warning_labels(PatternSet& patterns, std::size_t omega);

/// build_patterns + attach_warning_labels.
PatternSet build_pattern_set(const TimeSeries& series, std::size_t tau, std::size_t omega);

/// Per-column affine rescaling fitted on a training pattern collection:
/// v -> (v - min) / (max - min). Columns with min == max map to 0. Values
/// outside the training range are extrapolated, not clipped. Each flattened
/// pattern column (feature x lag) is scaled independently.
class MinMaxScaler {
public:
    void fit(const Matrix& x);
    void transform(Matrix& x) const; // in place; throws ShapeMismatch
    bool fitted() const { return !mins_.empty(); }
    const std::vector<double>& mins() const { return mins_; }
    const std::vector<double>& maxs() const { return maxs_; }

private:
    std::vector<double> mins_;
    std::vector<double> maxs_;
};

/// Spec-level wrappers over MinMaxScaler operating on whole pattern sets.
MinMaxScaler fit_scaler(const PatternSet& training_patterns);
PatternSet apply_scaler(const MinMaxScaler& scaler, const PatternSet& patterns);

} // namespace aep

#endif
