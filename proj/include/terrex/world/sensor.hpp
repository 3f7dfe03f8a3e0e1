#pragma once

#include "terrex/common.hpp"
#include "terrex/mapping/grid.hpp"
#include "terrex/world/terrain.hpp"

#include <optional>
#include <vector>

namespace terrex {

/// Sensor origin and orientation in the map frame. `orientation` rotates
/// sensor-frame vectors into the map frame.
struct SensorPose {
  Vec3 position = Vec3::Zero();
  Mat3 orientation = Mat3::Identity();

  /// Throws ConfigError unless orientation is orthonormal with det +1 (1e-9).
  void validate() const;
};

/// Sensor pose for a robot standing on the terrain at (x, y) with the given
/// heading; the sensor sits `mount_height` along the ground normal and its z
/// axis follows the normal (robot tilts with the terrain).
SensorPose sensor_pose_on_terrain(const GroundTruthTerrain& terrain, double x, double y,
                                  double heading, double mount_height);

struct RangeMeasurement {
  Vec3 point_in_sensor_frame = Vec3::Zero();
  Mat3 range_noise_covariance = Mat3::Zero();
};

struct HeightObservation {
  CellIndex cell;
  double z_bar = 0.0;
  double variance_meas = 0.0;
};

/// Spinning multi-ring range sensor.
///
/// Noise is split into an along-beam part and a part perpendicular to the
/// beam, each with a constant term and a term growing linearly with range:
///   Sigma_S = s_lat^2 I + (s_rad^2 - s_lat^2) d d^T
/// Beam divergence deflects each ray by a small random angle before it is
/// cast, so the return still lies on the surface; the covariance carries it as
/// extra perpendicular spread (div * range)^2.
/// With the defaults (0.02 m, no growth, no divergence) the covariance is isotropic.
struct SensorModel {
  int rings = 16;
  double min_elevation_deg = -15.0;
  double max_elevation_deg = 15.0;
  int azimuth_steps = 360;
  double max_range = 30.0;
  double min_range = 0.3;
  double range_noise_std = 0.02;
  double range_noise_per_m = 0.0;
  double lateral_noise_std = 0.02;
  double angular_noise_std = 0.0;  ///< rad, lateral spread per metre of range
  double beam_divergence = 0.0;  ///< rad, std of the ray deflection
  double march_step = 0.05;
  double tolerance = 1e-4;

  void validate() const;
  double radial_std(double range) const { return range_noise_std + range_noise_per_m * range; }
  double lateral_std(double range) const { return lateral_noise_std + angular_noise_std * range; }
  /// Perpendicular std used by the covariance, divergence included.
  double spread_std(double range) const;
  Mat3 covariance(const Vec3& point_in_sensor_frame) const;
  bool noiseless() const;
  /// Unit ray direction in the sensor frame.
  Vec3 ray_direction(int ring, int azimuth) const;
};

struct Scan {
  std::vector<RangeMeasurement> points;
  /// Sensor-frame directions of rays that found no surface within range.
  std::vector<Vec3> misses;
};

/// First intersection of a map-frame ray with the heightfield, or nothing
/// within `max_range`. Fixed-step march followed by bisection.
std::optional<double> cast_ray(const GroundTruthTerrain& terrain, const Vec3& origin,
                               const Vec3& direction, double min_range, double max_range,
                               double step, double tolerance);

Scan simulate_scan(const GroundTruthTerrain& terrain, const SensorPose& pose,
                   const SensorModel& model, Rng& rng);

/// Map-frame point of a measurement.
inline Vec3 to_map_frame(const RangeMeasurement& meas, const SensorPose& pose) {
  return pose.orientation * meas.point_in_sensor_frame + pose.position;
}

/// Height observation of a measurement: z = P_z(R p + t) and
/// var = J Sigma J^T with J the third row of R. Returns nothing when the
/// point falls outside the grid.
std::optional<HeightObservation> project_measurement(const RangeMeasurement& meas,
                                                     const SensorPose& pose,
                                                     const GridGeometry& grid);

}  // namespace terrex
