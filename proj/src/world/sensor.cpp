#include "terrex/world/sensor.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

namespace terrex {

void SensorPose::validate() const {
  const Mat3 gram = orientation.transpose() * orientation;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9 ||
      std::abs(orientation.determinant() - 1.0) > 1e-9)
    throw ConfigError("sensor orientation is not a proper rotation");
}

SensorPose sensor_pose_on_terrain(const GroundTruthTerrain& terrain, double x, double y,
                                  double heading, double mount_height) {
  const Vec3 up = terrain.normal(x, y);
  const Vec3 fwd_flat(std::cos(heading), std::sin(heading), 0.0);
  const Vec3 fwd = (fwd_flat - fwd_flat.dot(up) * up).normalized();
  SensorPose pose;
  pose.orientation.col(0) = fwd;
  pose.orientation.col(1) = up.cross(fwd);
  pose.orientation.col(2) = up;
  pose.position = Vec3(x, y, terrain.height(x, y)) + mount_height * up;
  return pose;
}

void SensorModel::validate() const {
  if (rings < 1 || azimuth_steps < 1) throw ConfigError("sensor needs at least one ring and azimuth step");
  if (max_elevation_deg < min_elevation_deg) throw ConfigError("sensor elevation range is inverted");
  if (!(max_range > 0.0) || !std::isfinite(max_range) || min_range < 0.0 || min_range >= max_range)
    throw ConfigError("sensor range limits are invalid");
  if (range_noise_std < 0.0 || range_noise_per_m < 0.0 || lateral_noise_std < 0.0 ||
      angular_noise_std < 0.0 || beam_divergence < 0.0)
    throw ConfigError("sensor noise parameters must be non-negative");
  if (!(march_step > 0.0) || !(tolerance > 0.0)) throw ConfigError("ray march step and tolerance must be positive");
}

double SensorModel::spread_std(double range) const {
  return std::hypot(lateral_std(range), beam_divergence * range);
}

Mat3 SensorModel::covariance(const Vec3& p) const {
  const double range = p.norm();
  const double lat = spread_std(range);
  const double rad = radial_std(range);
  Mat3 cov = lat * lat * Mat3::Identity();
  if (range > 0.0) {
    const Vec3 d = p / range;
    cov += (rad * rad - lat * lat) * (d * d.transpose());
  }
  return cov;
}

bool SensorModel::noiseless() const {
  return range_noise_std == 0.0 && range_noise_per_m == 0.0 && lateral_noise_std == 0.0 &&
         angular_noise_std == 0.0 && beam_divergence == 0.0;
}

Vec3 SensorModel::ray_direction(int ring, int azimuth) const {
  const double elev =
      rings == 1 ? min_elevation_deg
                 : min_elevation_deg + (max_elevation_deg - min_elevation_deg) * ring / (rings - 1);
  const double e = deg2rad(elev);
  const double a = 2.0 * kPi * azimuth / azimuth_steps;
  return {std::cos(e) * std::cos(a), std::cos(e) * std::sin(a), std::sin(e)};
}

std::optional<double> cast_ray(const GroundTruthTerrain& terrain, const Vec3& origin,
                               const Vec3& direction, double min_range, double max_range,
                               double step, double tolerance) {
  const double top = terrain.max_height_bound();
  auto gap = [&](double t) {
    const Vec3 p = origin + t * direction;
    return p.z() - terrain.height(p.x(), p.y());
  };

  double t = min_range;
  if (origin.z() > top) {
    if (direction.z() >= 0.0) return std::nullopt;
    t = std::max(t, (origin.z() - top) / -direction.z());
  }
  if (t > max_range) return std::nullopt;

  if (gap(t) <= 0.0) return std::nullopt;  // origin buried
  double t_prev = t;
  while (t_prev < max_range) {
    t = std::min(t_prev + step, max_range);
    const Vec3 p = origin + t * direction;
    if (!terrain.contains(p.x(), p.y())) return std::nullopt;
    if (direction.z() >= 0.0 && p.z() > top) return std::nullopt;
    const double f = p.z() - terrain.height(p.x(), p.y());
    if (f <= 0.0) {
      double lo = t_prev, hi = t;
      while (hi - lo > tolerance * 1e-3) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) > 0.0) lo = mid; else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    t_prev = t;
  }
  return std::nullopt;
}

Scan simulate_scan(const GroundTruthTerrain& terrain, const SensorPose& pose,
                   const SensorModel& model, Rng& rng) {
  Scan scan;
  scan.points.reserve(static_cast<std::size_t>(model.rings) * model.azimuth_steps / 2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool noisy = !model.noiseless();
  for (int ring = 0; ring < model.rings; ++ring) {
    for (int az = 0; az < model.azimuth_steps; ++az) {
      Vec3 d_s = model.ray_direction(ring, az);
      const Vec3 nominal = d_s;
      if (model.beam_divergence > 0.0) {
        const Vec3 u = d_s.unitOrthogonal();
        const Vec3 w = d_s.cross(u);
        const double a = gauss(rng), b = gauss(rng);
        d_s = (d_s + model.beam_divergence * (a * u + b * w)).normalized();
      }
      const Vec3 d_m = pose.orientation * d_s;
      const auto t = cast_ray(terrain, pose.position, d_m, model.min_range, model.max_range,
                              model.march_step, model.tolerance);
      if (!t) {
        scan.misses.push_back(nominal);
        continue;
      }
      RangeMeasurement m;
      m.point_in_sensor_frame = *t * d_s;
      m.range_noise_covariance = model.covariance(m.point_in_sensor_frame);
      if (noisy) {
        // Sample along the beam and in two perpendicular directions.
        const Vec3 u = d_s.unitOrthogonal();
        const Vec3 w = d_s.cross(u);
        const double g1 = gauss(rng), g2 = gauss(rng), g3 = gauss(rng);
        m.point_in_sensor_frame += model.radial_std(*t) * g1 * d_s +
                                   model.lateral_std(*t) * (g2 * u + g3 * w);
      }
      scan.points.push_back(m);
    }
  }
  return scan;
}

std::optional<HeightObservation> project_measurement(const RangeMeasurement& meas,
                                                     const SensorPose& pose,
                                                     const GridGeometry& grid) {
  const Vec3 p = to_map_frame(meas, pose);
  const CellIndex cell = grid.index_of(p.x(), p.y());
  if (!grid.in_bounds(cell)) return std::nullopt;
  const Eigen::RowVector3d jacobian = pose.orientation.row(2);
  HeightObservation obs;
  obs.cell = cell;
  obs.z_bar = p.z();
  const double var = jacobian * meas.range_noise_covariance * jacobian.transpose();
  obs.variance_meas = std::max(0.0, var);
  return obs;
}

}  // namespace terrex
