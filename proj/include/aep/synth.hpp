#ifndef AEP_SYNTH_HPP
#define AEP_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "aep/timeseries.hpp"

namespace aep {

/// Synthetic plant-like series: per-feature AR(1) baselines with Gaussian
/// noise, rare events placed uniformly at random under a minimum-spacing
/// constraint, and an additive linear drift on the precursor features over
/// the rho ticks before each event, ramping from 0 up to strength * sigma.
struct SynthConfig {
    std::size_t n_ticks = 1000;
    std::size_t d = 4;
    int tick_minutes = 60;
    std::size_t n_events = 2;
    std::size_t event_duration_min = 2;
    std::size_t event_duration_max = 4;
    std::size_t min_event_spacing = 50;
    std::size_t precursor_rho = 24;      // precursor window length, ticks
    double precursor_strength = 2.0;     // terminal drift magnitude in sigmas
    std::vector<std::size_t> precursor_features = {0}; // indices into 0..d-1
    double noise_sigma = 1.0;
    double ar_coefficient = 0.5;         // same phi for every feature
    double missing_rate = 0.0;           // uniform random missing mask
    std::uint64_t seed = 1;

    void validate() const;
};

TimeSeries generate(const SynthConfig& config);

/// Documented preset shapes. "ad_like" and "npp_like" mirror the source
/// applications' dataset sizes; the *_small variants are desk-scale.
SynthConfig synth_preset(const std::string& name);
std::vector<std::string> synth_preset_names();

} // namespace aep

#endif
