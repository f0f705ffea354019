#include "aep/timeseries.hpp"

#include <algorithm>
#include <string>

#include "aep/error.hpp"

namespace aep {

void TimeSeries::validate() const {
    if (n_ticks() == 0) fail(Errc::shape_mismatch, "series must have at least one tick");
    if (dims() == 0) fail(Errc::shape_mismatch, "series must have at least one feature");
    if (event_labels.size() != n_ticks())
        fail(Errc::shape_mismatch, "event label count " + std::to_string(event_labels.size()) +
                                       " != tick count " + std::to_string(n_ticks()));
    for (std::uint8_t v : event_labels)
        if (v > 1) fail(Errc::bad_event_value, "event labels must be 0 or 1");
    for (double v : features.data)
        if (!std::isnan(v) && !std::isfinite(v))
            fail(Errc::shape_mismatch, "non-finite feature reading");
}

TimeSeries impute_missing(const TimeSeries& series, ImputeStrategy strategy) {
    series.validate();
    TimeSeries out = series;
    const std::size_t n = series.n_ticks();
    const std::size_t d = series.dims();

    for (std::size_t f = 0; f < d; ++f) {
        if (strategy == ImputeStrategy::mean) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t t = 0; t < n; ++t) {
                const double v = series.features(t, f);
                if (!TimeSeries::is_missing(v)) {
                    sum += v;
                    ++count;
                }
            }
            if (count == 0)
                fail(Errc::all_missing_feature,
                     "feature " + std::to_string(f + 1) + " has no observed values");
            const double mean = sum / static_cast<double>(count);
            for (std::size_t t = 0; t < n; ++t)
                if (TimeSeries::is_missing(out.features(t, f))) out.features(t, f) = mean;
        } else {
            if (TimeSeries::is_missing(series.features(0, f)))
                fail(Errc::leading_gap,
                     "feature " + std::to_string(f + 1) + " starts with a missing value");
            for (std::size_t t = 1; t < n; ++t)
                if (TimeSeries::is_missing(out.features(t, f)))
                    out.features(t, f) = out.features(t - 1, f);
        }
    }
    return out;
}

LabelVec build_warning_labels(const LabelVec& y, std::size_t omega) {
    if (omega < 1) fail(Errc::shape_mismatch, "omega must be >= 1");
    const std::size_t n = y.size();
    LabelVec out(n, 0);
    // Backward sweep keeping the distance to the next event; the window
    // {t, ..., t+omega-1} contains an event iff that distance is < omega.
    constexpr std::size_t kNoEvent = static_cast<std::size_t>(-1);
    std::size_t until_event = kNoEvent;
    for (std::size_t i = n; i-- > 0;) {
        if (y[i]) until_event = 0;
        else if (until_event != kNoEvent) ++until_event;
        out[i] = (until_event != kNoEvent && until_event < omega) ? 1 : 0;
    }
    return out;
}

PatternSet build_patterns(const TimeSeries& series, std::size_t tau) {
    series.validate();
    const std::size_t n = series.n_ticks();
    const std::size_t d = series.dims();
    if (tau >= n)
        fail(Errc::tau_too_large, "tau " + std::to_string(tau) +
                                      " leaves no pattern in a series of length " + std::to_string(n));
    for (double v : series.features.data)
        if (TimeSeries::is_missing(v))
            fail(Errc::shape_mismatch, "patterns require an imputed series (missing values present)");

    PatternSet out;
    out.tau = tau;
    out.d = d;
    out.n_ticks = n;
    out.tick_minutes = series.tick_minutes;
    out.series_y = series.event_labels;

    const std::size_t n_patterns = n - tau;
    const std::size_t cols = d * (tau + 1);
    out.X = Matrix(n_patterns, cols);
    out.ticks.resize(n_patterns);
    out.original_labels.resize(n_patterns);

    for (std::size_t i = 0; i < n_patterns; ++i) {
        const std::size_t t = tau + 1 + i; // 1-based tick
        out.ticks[i] = static_cast<std::int32_t>(t);
        out.original_labels[i] = series.event_labels[t - 1];
        double* row = out.X.data.data() + i * cols;
        for (std::size_t j = 0; j <= tau; ++j) {
            const double* src = series.features.data.data() + (t - tau - 1 + j) * d;
            std::copy(src, src + d, row + j * d);
        }
    }
    return out;
}

void attach_warning_labels(PatternSet& patterns, std::size_t omega) {
    patterns.series_warning = build_warning_labels(patterns.series_y, omega);
    patterns.omega = omega;
    patterns.warning_labels.resize(patterns.size());
    for (std::size_t i = 0; i < patterns.size(); ++i)
        patterns.warning_labels[i] = patterns.series_warning[patterns.ticks[i] - 1];
}

PatternSet build_pattern_set(const TimeSeries& series, std::size_t tau, std::size_t omega) {
    PatternSet out = build_patterns(series, tau);
    attach_warning_labels(out, omega);
    return out;
}

void MinMaxScaler::fit(const Matrix& x) {
    if (x.rows == 0) fail(Errc::empty_training_set, "scaler needs at least one pattern");
    mins_.assign(x.cols, 0.0);
    maxs_.assign(x.cols, 0.0);
    for (std::size_t c = 0; c < x.cols; ++c) {
        double lo = x(0, c), hi = x(0, c);
        for (std::size_t r = 1; r < x.rows; ++r) {
            lo = std::min(lo, x(r, c));
            hi = std::max(hi, x(r, c));
        }
        mins_[c] = lo;
        maxs_[c] = hi;
    }
}

void MinMaxScaler::transform(Matrix& x) const {
    if (!fitted()) fail(Errc::empty_training_set, "scaler not fitted");
    if (x.cols != mins_.size())
        fail(Errc::shape_mismatch, "scaler fitted on " + std::to_string(mins_.size()) +
                                       " columns, input has " + std::to_string(x.cols));
    for (std::size_t c = 0; c < x.cols; ++c) {
        const double lo = mins_[c];
        const double range = maxs_[c] - lo;
        if (range == 0.0) {
            for (std::size_t r = 0; r < x.rows; ++r) x(r, c) = 0.0;
        } else {
            const double inv = 1.0 / range;
            for (std::size_t r = 0; r < x.rows; ++r) x(r, c) = (x(r, c) - lo) * inv;
        }
    }
}

MinMaxScaler fit_scaler(const PatternSet& training_patterns) {
    MinMaxScaler scaler;
    scaler.fit(training_patterns.X);
    return scaler;
}

PatternSet apply_scaler(const MinMaxScaler& scaler, const PatternSet& patterns) {
    PatternSet out = patterns;
    scaler.transform(out.X);
    return out;
}

} // namespace aep
