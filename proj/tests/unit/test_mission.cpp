#include "terrex/mission/battery.hpp"
#include "terrex/mission/episode.hpp"
#include "terrex/mission/robot.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace terrex;

namespace {

MissionConfig small_mission(double duration) {
  MissionConfig m;
  m.duration = duration;
  m.scan_period = 0.5;
  m.map_resolution = 0.2;
  m.local_map_size = 61;
  m.sensor.rings = 16;
  m.sensor.min_elevation_deg = -30.0;
  m.sensor.max_elevation_deg = 10.0;
  m.sensor.azimuth_steps = 90;
  m.sensor.max_range = 6.0;
  m.sensor.march_step = 0.15;
  m.planner.vertex_budget = 15;
  m.planner.gain_sensor.range = 5.0;
  m.planner.gain_sensor.min_elevation_deg = -30.0;
  m.planner.gain_sensor.max_elevation_deg = 10.0;
  return m;
}

GroundTruthTerrain flat_terrain(double extent) {
  TerrainConfig c;
  c.extent_x = c.extent_y = extent;
  return generate_terrain(c, 1);
}

std::string serialize(const MissionRecord& r) {
  std::ostringstream out;
  write_record(r, out);
  return out.str();
}

}  // namespace

TEST_CASE("battery examples") {
  const BatteryModel b;
  CHECK(soc_at(0.0, b) == 100.0);
  CHECK(soc_at(1000.0, b) == 60.0);
  CHECK(soc_at(2400.0, b) == 4.0);
  for (double t : {0.0, 10.0, 333.0, 1200.0})
    CHECK(soc_at(t, b) - soc_at(t + 100.0, b) == doctest::Approx(4.0).epsilon(1e-12));
  BatteryModel bad;
  bad.capacity_ah = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("step_execute turns, drives and stops at the segment end") {
  const GroundTruthTerrain t = flat_terrain(10.0);
  RobotState s;
  s.position = Vec3(1, 1, 0);
  const PathSegment seg{Vec2(1, 1), Vec2(1, 2)};
  s = step_execute(s, seg, 0.5, t);
  CHECK(s.heading == doctest::Approx(kPi / 2));
  CHECK(s.position.y() == doctest::Approx(1.4));
  for (int k = 0; k < 10; ++k) s = step_execute(s, seg, 0.5, t);
  CHECK(s.position.x() == doctest::Approx(1.0));
  CHECK(s.position.y() == doctest::Approx(2.0));

  TerrainConfig c;
  c.extent_x = c.extent_y = 10.0;
  c.ramps.push_back({Vec2(0, 0), 0.0, 10.0, 5.0});
  const GroundTruthTerrain ramp = generate_terrain(c, 1);
  RobotState r;
  r.position = Vec3(1, 5, ramp.height(1, 5));
  r = step_execute(r, {Vec2(1, 5), Vec2(3, 5)}, 1.0, ramp);
  CHECK(r.position.z() == doctest::Approx(ramp.height(1.8, 5)));
}

TEST_CASE("hazard check") {
  const GroundTruthTerrain flat = flat_terrain(10.0);
  RobotState s;
  s.position = Vec3(5, 5, 0);
  CHECK(hazard_check(s, flat) == Hazard::safe);
  CHECK(footprint_height_span(Vec2(5, 5), 0.3, flat) == 0.0);

  TerrainConfig c;
  c.extent_x = c.extent_y = 10.0;
  c.ramps.push_back({Vec2(2, 0), 0.0, 35.0, 5.0});
  const GroundTruthTerrain steep = generate_terrain(c, 1);
  s.position = Vec3(4, 5, steep.height(4, 5));
  CHECK(hazard_check(s, steep) == Hazard::tipped_over);

  c.ramps[0].slope_deg = 25.0;
  const GroundTruthTerrain mild = generate_terrain(c, 1);
  s.position = Vec3(4, 5, mild.height(4, 5));
  CHECK(hazard_check(s, mild) == Hazard::safe);

  TerrainConfig rock;
  rock.extent_x = rock.extent_y = 10.0;
  rock.rocks.push_back({Vec2(5, 5), 0.5, 0.8});
  const GroundTruthTerrain r = generate_terrain(rock, 1);
  CHECK(footprint_height_span(Vec2(5, 5), 0.3, r) > 0.35);
  s.position = Vec3(5, 5, r.height(5, 5));
  CHECK(hazard_check(s, r) == Hazard::tipped_over);
  CHECK(to_string(Hazard::tipped_over) == "tipped_over");
}

TEST_CASE("mission config validation") {
  MissionConfig m;
  CHECK_NOTHROW(m.validate());
  m.local_map_size = 100;
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m = {};
  m.scan_period = 0.0;
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m = {};
  m.stranded_limit = 0;
  CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("flat arena completes and is reproducible") {
  const GroundTruthTerrain t = flat_terrain(16.0);
  const MissionConfig m = small_mission(20.0);
  const Spawn spawn{Vec2(8, 8), 0.3};
  const MissionRecord a = run_episode(t, m, spawn, 7);
  CHECK(a.termination == Termination::completed);
  CHECK(a.duration == doctest::Approx(20.0));
  REQUIRE(a.iterations.size() == 20);
  CHECK(a.iterations.front().soc == 100.0);
  double prev = 0.0;
  for (const auto& it : a.iterations) {
    CHECK(it.explored_volume >= prev);
    prev = it.explored_volume;
  }
  CHECK(a.global.size() > 0);
  CHECK(replay_hazards(a, t, m.hazard, m.planner.robot_radius) == 0);

  const MissionRecord b = run_episode(t, m, spawn, 7);
  CHECK(serialize(a) == serialize(b));
  const MissionRecord c = run_episode(t, m, spawn, 8);
  CHECK(serialize(a) != serialize(c));
}

TEST_CASE("record round trip") {
  const GroundTruthTerrain t = flat_terrain(16.0);
  const MissionRecord a = run_episode(t, small_mission(5.0), Spawn{Vec2(8, 8), 0.0}, 1);
  const std::string text = serialize(a);
  std::istringstream in(text);
  const MissionRecord back = read_record(in);
  CHECK(back.termination == a.termination);
  CHECK(back.duration == a.duration);
  CHECK(back.iterations.size() == a.iterations.size());
  CHECK(back.histogram.counts == a.histogram.counts);
  CHECK(serialize(back) == text);

  std::istringstream broken("{\"type\":\"iteration\"}\n");
  CHECK_THROWS_AS(read_record(broken), ConfigError);
}

TEST_CASE("invalid spawn is a configuration error") {
  const GroundTruthTerrain t = flat_terrain(16.0);
  CHECK_THROWS_AS(run_episode(t, small_mission(5.0), Spawn{Vec2(30, 8), 0.0}, 1), ConfigError);
  TerrainConfig c;
  c.extent_x = c.extent_y = 16.0;
  c.rocks.push_back({Vec2(8, 8), 0.5, 0.8});
  const GroundTruthTerrain rock = generate_terrain(c, 1);
  CHECK_THROWS_AS(run_episode(rock, small_mission(5.0), Spawn{Vec2(8, 8), 0.0}, 1), ConfigError);
}

TEST_CASE("a steep ridge is never crossed") {
  TerrainConfig c;
  c.extent_x = c.extent_y = 16.0;
  c.ridges.push_back({Vec2(10, 0), 90.0, 35.0, 1.0});
  const GroundTruthTerrain t = generate_terrain(c, 1);
  const MissionConfig m = small_mission(60.0);
  for (std::uint64_t seed : {1, 2}) {
    const MissionRecord r = run_episode(t, m, Spawn{Vec2(4, 8), 0.0}, seed);
    CHECK(r.termination != Termination::tipped_over);
    CHECK(replay_hazards(r, t, m.hazard, m.planner.robot_radius) == 0);
    for (const Vec3& p : r.trajectory) CHECK(p.x() < 10.0);
  }
}

TEST_CASE("termination names round trip") {
  for (auto t : {Termination::completed, Termination::tipped_over, Termination::stranded})
    CHECK(parse_termination(to_string(t)) == t);
  CHECK_THROWS_AS(parse_termination("crashed"), ConfigError);
}
