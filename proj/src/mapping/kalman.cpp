#include "terrex/mapping/kalman.hpp"

#include <algorithm>
#include <cmath>

namespace terrex {

double confidence_of(double variance) {
  if (!(variance >= 0.0)) throw InvariantViolation("negative or NaN elevation variance");
  return 1.0 - std::clamp(variance, 0.0, 1.0);
}

ElevationCell predict(const ElevationCell& cell, const TransitionModel& model) {
  if (!cell.initialized) throw InvariantViolation("predict on an uninitialized cell");
  ElevationCell out = cell;
  out.elevation = model.a * cell.elevation;
  out.variance = model.a * model.a * cell.variance + model.process_noise;
  out.confidence = confidence_of(out.variance);
  return out;
}

ElevationCell update(const ElevationCell& cell, const HeightObservation& obs) {
  if (!(obs.variance_meas >= 0.0)) throw InvariantViolation("negative measurement variance");
  ElevationCell out = cell;
  if (!cell.initialized) {
    out.elevation = obs.z_bar;
    out.variance = obs.variance_meas;
    out.initialized = true;
  } else {
    const ElevationCell prior = predict(cell);
    const double denom = prior.variance + obs.variance_meas;
    const double gain = denom > 0.0 ? prior.variance / denom : 0.0;
    out.elevation = prior.elevation + gain * (obs.z_bar - prior.elevation);
    out.variance = (1.0 - gain) * prior.variance;
  }
  out.confidence = confidence_of(out.variance);
  ++out.observation_count;
  return out;
}

}  // namespace terrex
