#include "terrex/world/sensor.hpp"
#include "terrex/world/terrain.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <sstream>

using namespace terrex;

namespace {

GroundTruthTerrain flat(double extent = 20.0) {
  TerrainConfig c;
  c.extent_x = extent;
  c.extent_y = extent;
  return generate_terrain(c, 1);
}

double numeric_slope_deg(const GroundTruthTerrain& t, double x, double y) {
  const double h = 1e-6;
  const double gx = (t.height(x + h, y) - t.height(x - h, y)) / (2 * h);
  const double gy = (t.height(x, y + h) - t.height(x, y - h)) / (2 * h);
  return rad2deg(std::atan(std::hypot(gx, gy)));
}

}  // namespace

TEST_CASE("flat terrain is zero everywhere") {
  const GroundTruthTerrain t = flat();
  for (double x : {0.0, 3.3, 19.9})
    for (double y : {0.0, 7.1, 20.0}) {
      CHECK(t.height(x, y) == 0.0);
      CHECK(t.slope_deg(x, y) == 0.0);
    }
}

TEST_CASE("crater and rock profiles") {
  TerrainConfig c;
  c.extent_x = c.extent_y = 20.0;
  c.craters.push_back({Vec2(5, 5), 2.0, 0.6});
  c.rocks.push_back({Vec2(15, 15), 0.5, 0.3});
  const GroundTruthTerrain t = generate_terrain(c, 1);
  CHECK(t.height(5, 5) == doctest::Approx(-0.6));
  CHECK(t.height(7.5, 5) == 0.0);
  CHECK(t.height(15, 15) == doctest::Approx(0.3));
  // (1 - u^2)^2 at u = 0.5
  CHECK(t.height(6, 5) == doctest::Approx(-0.6 * 0.5625));
  CHECK(t.max_height_bound() >= 0.3);
  CHECK(t.min_height_bound() <= -0.6);
}

TEST_CASE("analytic gradient matches finite differences") {
  TerrainConfig c;
  c.extent_x = c.extent_y = 30.0;
  c.base = {0.4, 6.0, 4};
  c.crater_field = {6, 1.0, 3.0, 0.2, 0.4};
  c.rock_field = {8, 0.3, 0.8, 0.1, 0.4};
  c.ramps.push_back({Vec2(20, 0), 90.0, 12.0, 1.0});
  c.ridges.push_back({Vec2(0, 25), 0.0, 25.0, 0.8});
  const GroundTruthTerrain t = generate_terrain(c, 7);
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.5, 29.5);
  for (int k = 0; k < 300; ++k) {
    const double x = u(rng), y = u(rng);
    CHECK(t.slope_deg(x, y) == doctest::Approx(numeric_slope_deg(t, x, y)).epsilon(1e-4));
  }
}

TEST_CASE("ramp slope equals its configured angle") {
  TerrainConfig c;
  c.extent_x = c.extent_y = 20.0;
  c.ramps.push_back({Vec2(5, 0), 0.0, 35.0, 3.0});
  const GroundTruthTerrain t = generate_terrain(c, 1);
  CHECK(t.slope_deg(6.0, 10.0) == doctest::Approx(35.0));
  CHECK(t.slope_deg(4.0, 10.0) == 0.0);
  CHECK(t.height(5.0 + 3.0 / std::tan(deg2rad(35.0)) + 1.0, 10.0) == doctest::Approx(3.0));
}

TEST_CASE("terrain generation is deterministic and validates input") {
  TerrainConfig c;
  c.extent_x = c.extent_y = 30.0;
  c.crater_field = {10, 1.0, 3.0, 0.2, 0.4};
  c.spawn_zones.push_back({Vec2(5, 5), 3.0});
  const GroundTruthTerrain a = generate_terrain(c, 9);
  const GroundTruthTerrain b = generate_terrain(c, 9);
  REQUIRE(a.craters().size() == b.craters().size());
  for (std::size_t k = 0; k < a.craters().size(); ++k) {
    CHECK(a.craters()[k].center == b.craters()[k].center);
    CHECK((a.craters()[k].center - Vec2(5, 5)).norm() >= 3.0 + a.craters()[k].radius);
  }

  TerrainConfig bad = c;
  bad.extent_x = 0.0;
  CHECK_THROWS_AS(generate_terrain(bad, 1), ConfigError);
  bad = c;
  bad.craters.push_back({Vec2(20, 20), 15.0, 1.0});
  CHECK_THROWS_AS(generate_terrain(bad, 1), ConfigError);
  bad = c;
  bad.rocks.push_back({Vec2(6, 6), 0.5, 0.2});
  CHECK_THROWS_AS(generate_terrain(bad, 1), ConfigError);
}

TEST_CASE("heightfield export header and shape") {
  TerrainConfig c;
  c.extent_x = 2.0;
  c.extent_y = 1.0;
  const GroundTruthTerrain t = generate_terrain(c, 1);
  std::ostringstream out;
  export_heightfield_csv(t, 0.5, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# extent_x=2,extent_y=1,resolution=0.5,rows=4,cols=2");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line == "0.000000,0.000000");
  }
  CHECK(rows == 4);
}

TEST_CASE("sensor pose on flat ground is upright") {
  const GroundTruthTerrain t = flat();
  const SensorPose p = sensor_pose_on_terrain(t, 5, 5, 0.3, 0.8);
  CHECK_NOTHROW(p.validate());
  CHECK(p.position.z() == doctest::Approx(0.8));
  CHECK((p.orientation.col(2) - Vec3::UnitZ()).norm() < 1e-12);
  SensorPose bad = p;
  bad.orientation(0, 0) = 2.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("ray cast against flat ground") {
  const GroundTruthTerrain t = flat(40.0);
  const Vec3 origin(10, 10, 1.0);
  for (double elev : {-5.0, -15.0, -40.0}) {
    const double e = deg2rad(elev);
    const Vec3 d(std::cos(e), 0.0, std::sin(e));
    const auto hit = cast_ray(t, origin, d, 0.1, 30.0, 0.05, 1e-4);
    REQUIRE(hit);
    CHECK(*hit == doctest::Approx(1.0 / std::sin(-e)).epsilon(1e-6));
  }
  CHECK_FALSE(cast_ray(t, origin, Vec3(1, 0, 0), 0.1, 30.0, 0.05, 1e-4));
  CHECK_FALSE(cast_ray(t, Vec3(10, 10, -1.0), Vec3(1, 0, 0), 0.1, 30.0, 0.05, 1e-4));
}

TEST_CASE("noiseless scan reproduces the ground") {
  const GroundTruthTerrain t = flat();
  SensorModel m;
  m.range_noise_std = m.lateral_noise_std = 0.0;
  m.azimuth_steps = 36;
  REQUIRE(m.noiseless());
  const SensorPose pose = sensor_pose_on_terrain(t, 10, 10, 0.0, 0.8);
  Rng rng(1);
  const Scan s = simulate_scan(t, pose, m, rng);
  CHECK(!s.points.empty());
  CHECK(s.points.size() + s.misses.size() == static_cast<std::size_t>(m.rings * m.azimuth_steps));
  for (const auto& pt : s.points) CHECK(std::abs(to_map_frame(pt, pose).z()) < 1e-6);
}

TEST_CASE("isotropic noise projects to its own variance") {
  SensorModel m;
  const GridGeometry g = GridGeometry::for_arena(20, 20, 0.1, 151);
  SensorPose pose;
  pose.position = Vec3(10, 10, 1);
  RangeMeasurement meas;
  meas.point_in_sensor_frame = Vec3(3, 1, -1);
  meas.range_noise_covariance = m.covariance(meas.point_in_sensor_frame);
  const auto obs = project_measurement(meas, pose, g);
  REQUIRE(obs);
  CHECK(obs->variance_meas == doctest::Approx(0.02 * 0.02));
  CHECK(obs->z_bar == doctest::Approx(0.0));
  CHECK(obs->cell == CellIndex{130, 110});

  meas.point_in_sensor_frame = Vec3(30, 0, -1);
  CHECK_FALSE(project_measurement(meas, pose, g));
}

TEST_CASE("measurement variance is invariant under sensor yaw") {
  SensorModel m;
  m.range_noise_per_m = 0.01;
  m.angular_noise_std = 0.004;
  const GridGeometry g = GridGeometry::for_arena(40, 40, 0.1, 151);
  const Vec3 p(4, 1, -0.8);
  Eigen::AngleAxisd tilt(0.2, Vec3(1, 1, 0).normalized());
  for (double yaw : {0.0, 0.7, 2.0, -2.9}) {
    SensorPose pose;
    pose.position = Vec3(20, 20, 1);
    pose.orientation = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix() * tilt.toRotationMatrix();
    SensorPose ref = pose;
    ref.orientation = tilt.toRotationMatrix();
    RangeMeasurement meas{p, m.covariance(p)};
    CHECK(project_measurement(meas, pose, g)->variance_meas ==
          doctest::Approx(project_measurement(meas, ref, g)->variance_meas));
  }
}

TEST_CASE("beam divergence widens the covariance but keeps returns on the surface") {
  SensorModel m;
  m.range_noise_std = m.lateral_noise_std = 0.0;
  m.beam_divergence = 0.01;
  const Mat3 c = m.covariance(Vec3(10, 0, 0));
  CHECK(c(2, 2) == doctest::Approx(1e-2));
  CHECK(c(1, 1) == doctest::Approx(1e-2));
  CHECK(c(0, 0) == doctest::Approx(0.0));

  const GroundTruthTerrain t = flat();
  m.azimuth_steps = 36;
  m.beam_divergence = 0.05;
  REQUIRE_FALSE(m.noiseless());
  const SensorPose pose = sensor_pose_on_terrain(t, 10, 10, 0.0, 0.8);
  Rng rng(2);
  const Scan s = simulate_scan(t, pose, m, rng);
  REQUIRE(!s.points.empty());
  double max_var = 0.0;
  for (const auto& pt : s.points) {
    CHECK(std::abs(to_map_frame(pt, pose).z()) < 1e-6);
    max_var = std::max(max_var, pt.range_noise_covariance(2, 2));
  }
  CHECK(max_var > 0.0);
}
