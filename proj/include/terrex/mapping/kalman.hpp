#pragma once

#include "terrex/common.hpp"
#include "terrex/world/sensor.hpp"

namespace terrex {

/// Per-cell scalar Kalman state of the elevation map.
struct ElevationCell {
  double elevation = 0.0;
  double variance = 0.0;
  double confidence = 0.0;
  std::uint32_t observation_count = 0;
  bool initialized = false;
};

/// First-order terrain model h_k = a h_{k-1} + w, w ~ N(0, Q). The terrain is
/// static, so the mapping pipeline always runs with a = 1, Q = 0.
struct TransitionModel {
  double a = 1.0;
  double process_noise = 0.0;
};

/// 1 - clip(variance; 0, 1). Throws InvariantViolation on negative variance.
double confidence_of(double variance);

/// Kalman prediction. Requires an initialized cell.
ElevationCell predict(const ElevationCell& cell, const TransitionModel& model = {});

/// Kalman measurement update followed by confidence recomputation.
///
/// An uninitialized cell takes the measurement directly. When both prior and
/// measurement variance are zero the gain is defined as 0 and the prior is
/// kept.
ElevationCell update(const ElevationCell& cell, const HeightObservation& obs);

}  // namespace terrex
