#include "aep/synth.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "aep/error.hpp"
#include "aep/rng.hpp"

namespace aep {

void SynthConfig::validate() const {
    if (n_ticks < 1) fail(Errc::infeasible_placement, "series length must be >= 1");
    if (d < 1) fail(Errc::infeasible_placement, "need at least one feature");
    if (event_duration_min < 1 || event_duration_max < event_duration_min)
        fail(Errc::infeasible_placement, "event duration range is empty");
    if (precursor_rho < 1) fail(Errc::infeasible_placement, "precursor window must be >= 1");
    if (precursor_strength < 0.0) fail(Errc::infeasible_placement, "precursor strength must be >= 0");
    if (noise_sigma <= 0.0) fail(Errc::infeasible_placement, "noise sigma must be > 0");
    if (missing_rate < 0.0 || missing_rate >= 1.0)
        fail(Errc::infeasible_placement, "missing rate must be in [0, 1)");
    if (n_events > 0 && n_events * (event_duration_max + min_event_spacing) > n_ticks)
        fail(Errc::infeasible_placement, "events cannot fit: n_events * (max duration + spacing) "
                                         "exceeds the series length");
    for (std::size_t f : precursor_features)
        if (f >= d) fail(Errc::infeasible_placement, "precursor feature index out of range");
}

namespace {

struct Placement {
    std::size_t start; // 1-based tick
    std::size_t duration;
};

/// Uniform placement of non-overlapping events with the spacing constraint:
/// durations are drawn first, then starts via the gap-allocation trick
/// (sorted uniform draws over the slack), so no rejection loop is needed for
/// the positions themselves. Redraws durations a bounded number of times if
/// an unlucky draw leaves negative slack.
std::vector<Placement> place_events(const SynthConfig& cfg, Rng& rng) {
    std::vector<Placement> out(cfg.n_events);
    if (cfg.n_events == 0) return out;

    for (int attempt = 0; attempt < 100; ++attempt) {
        std::size_t total_duration = 0;
        for (auto& p : out) {
            p.duration = cfg.event_duration_min +
                         rng.index(cfg.event_duration_max - cfg.event_duration_min + 1);
            total_duration += p.duration;
        }
        const std::size_t reserved = total_duration + (cfg.n_events - 1) * cfg.min_event_spacing;
        if (reserved > cfg.n_ticks) continue;
        const std::size_t slack = cfg.n_ticks - reserved;

        std::vector<std::size_t> offsets(cfg.n_events);
        for (auto& o : offsets) o = rng.index(slack + 1);
        std::sort(offsets.begin(), offsets.end());

        // start_e = 1 + offsets[e] + sum of earlier durations and spacings
        std::size_t base = 1;
        for (std::size_t e = 0; e < cfg.n_events; ++e) {
            out[e].start = base + offsets[e];
            base += out[e].duration + cfg.min_event_spacing;
        }
        return out;
    }
    fail(Errc::infeasible_placement, "could not place events after bounded retries");
}

} // namespace

TimeSeries generate(const SynthConfig& config) {
    config.validate();
    Rng rng(derive_seed(config.seed, {seed_tag::synth}));

    TimeSeries series;
    series.tick_minutes = config.tick_minutes;
    series.features = Matrix(config.n_ticks, config.d);
    series.event_labels.assign(config.n_ticks, 0);

    const auto placements = place_events(config, rng);
    for (const auto& p : placements)
        for (std::size_t t = p.start; t < p.start + p.duration; ++t)
            series.event_labels[t - 1] = 1;

    // AR(1) baseline per feature, v_0 = 0.
    for (std::size_t f = 0; f < config.d; ++f) {
        double value = 0.0;
        for (std::size_t t = 0; t < config.n_ticks; ++t) {
            value = config.ar_coefficient * value + config.noise_sigma * rng.normal();
            series.features(t, f) = value;
        }
    }

    // Additive precursor ramp on the chosen features over the rho ticks
    // before each event, ending at strength * sigma one tick before onset.
    const double terminal = config.precursor_strength * config.noise_sigma;
    for (const auto& p : placements) {
        for (std::size_t i = 1; i <= config.precursor_rho; ++i) {
            const std::int64_t t = static_cast<std::int64_t>(p.start) -
                                   static_cast<std::int64_t>(config.precursor_rho) +
                                   static_cast<std::int64_t>(i) - 1;
            if (t < 1) continue;
            const double ramp =
                terminal * static_cast<double>(i) / static_cast<double>(config.precursor_rho);
            for (std::size_t f : config.precursor_features)
                series.features(static_cast<std::size_t>(t) - 1, f) += ramp;
        }
    }

    if (config.missing_rate > 0.0) {
        for (std::size_t t = 0; t < config.n_ticks; ++t)
            for (std::size_t f = 0; f < config.d; ++f)
                if (rng.uniform01() < config.missing_rate)
                    series.features(t, f) = std::numeric_limits<double>::quiet_NaN();
    }

    return series;
}

SynthConfig synth_preset(const std::string& name) {
    SynthConfig cfg;
    if (name == "ad_like") {
        cfg.n_ticks = 14617;
        cfg.d = 9;
        cfg.tick_minutes = 60;
        cfg.n_events = 5;
        cfg.event_duration_min = 3;
        cfg.event_duration_max = 6;
        cfg.min_event_spacing = 1200;
        cfg.precursor_rho = 48;
        cfg.precursor_strength = 2.0;
        cfg.precursor_features = {0, 1, 2};
        cfg.ar_coefficient = 0.5;
    } else if (name == "ad_like_small") {
        cfg.n_ticks = 1462;
        cfg.d = 9;
        cfg.tick_minutes = 60;
        cfg.n_events = 5;
        cfg.event_duration_min = 3;
        cfg.event_duration_max = 6;
        cfg.min_event_spacing = 200;
        cfg.precursor_rho = 48;
        cfg.precursor_strength = 2.0;
        cfg.precursor_features = {0, 1, 2};
        cfg.ar_coefficient = 0.5;
    } else if (name == "npp_like") {
        cfg.n_ticks = 30664;
        cfg.d = 14;
        cfg.tick_minutes = 180;
        cfg.n_events = 6;
        cfg.event_duration_min = 2;
        cfg.event_duration_max = 4;
        cfg.min_event_spacing = 2500;
        cfg.precursor_rho = 16;
        cfg.precursor_strength = 2.0;
        cfg.precursor_features = {0, 1, 2, 3};
        cfg.ar_coefficient = 0.5;
    } else if (name == "npp_like_small") {
        cfg.n_ticks = 10224;
        cfg.d = 14;
        cfg.tick_minutes = 180;
        cfg.n_events = 6;
        cfg.event_duration_min = 2;
        cfg.event_duration_max = 4;
        cfg.min_event_spacing = 800;
        cfg.precursor_rho = 16;
        cfg.precursor_strength = 2.0;
        cfg.precursor_features = {0, 1, 2, 3};
        cfg.ar_coefficient = 0.5;
    } else {
        fail(Errc::parse_error, "unknown synth preset '" + name + "'");
    }
    return cfg;
}

std::vector<std::string> synth_preset_names() {
    return {"ad_like", "ad_like_small", "npp_like", "npp_like_small"};
}

} // namespace aep
