#ifndef AEP_CSV_HPP
#define AEP_CSV_HPP

#include <string>

#include "aep/timeseries.hpp"

namespace aep {

/// Reads the series CSV format: header `tick,<f1..fd>,event`, one row per
/// tick, ticks consecutive integers (any start; renumbered internally to
/// 1..n), event in {0,1}, empty feature cells meaning missing. Errors carry
/// 1-based line numbers. tick_minutes is caller-declared metadata.
TimeSeries ingest_csv(const std::string& path, int tick_minutes = 60);

/// Writes the same format (ticks 1..n, missing values as empty cells,
/// shortest-round-trip float formatting).
void write_series_csv(const std::string& path, const TimeSeries& series);

} // namespace aep

#endif
