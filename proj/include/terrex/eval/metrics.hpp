#pragma once

#include "terrex/eval/histogram.hpp"
#include "terrex/mapping/elevation_map.hpp"
#include "terrex/mission/episode.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace terrex {

/// Largest bin edge k/10 whose cumulative mass at or below it is at most
/// `tail` of the total. Throws ConfigError for an empty histogram or a tail
/// outside (0, 1).
double derive_threshold(const ConfidenceHistogram& hist, double tail);

/// Percentage of observed cells with confidence <= threshold; nothing for
/// an empty map.
std::optional<double> low_confidence_ratio(const GlobalConfidenceMap& global, double threshold);

using Curve = std::vector<std::pair<double, double>>;

/// Explored volume sampled every `sample_dt` over [0, horizon], held at the
/// last recorded value after the episode ends.
Curve exploration_curve(const MissionRecord& record, double sample_dt, double horizon);

/// Pointwise mean of curves sampled on the same grid.
Curve average_curves(const std::vector<Curve>& curves);

}  // namespace terrex
