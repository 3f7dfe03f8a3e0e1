#pragma once

#include "terrex/eval/histogram.hpp"
#include "terrex/mapping/elevation_map.hpp"
#include "terrex/mission/battery.hpp"
#include "terrex/mission/robot.hpp"
#include "terrex/planner/planner.hpp"
#include "terrex/traversability/attributes.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace terrex {

struct MissionConfig {
  double duration = 2400.0;
  double sim_dt = 0.1;
  double scan_period = 0.1;
  double plan_period = 1.0;
  double speed = 0.8;
  double sensor_height = 0.8;
  int stranded_limit = 10;
  /// Flat patch seeded under the robot at start-up (sensor blind zone).
  double start_patch_half_extent = 3.0;
  double start_patch_variance = 0.01;
  double map_resolution = 0.1;
  int local_map_size = 151;
  double voxel_size = 0.4;
  double voxel_headroom = 3.0;

  SensorModel sensor;
  TraversabilityParams traversability;
  PlannerParams planner;
  HazardLimits hazard;
  BatteryModel battery;

  void validate() const;
};

struct Spawn {
  Vec2 position = Vec2::Zero();
  double heading = 0.0;
};

enum class Termination { completed, tipped_over, stranded };

std::string_view to_string(Termination t);
Termination parse_termination(std::string_view s);

/// One planning iteration.
struct IterationRecord {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  double heading = 0.0;
  double soc = 0.0;
  double explored_volume = 0.0;
  std::string event;
};

struct MissionRecord {
  std::vector<IterationRecord> iterations;
  Termination termination = Termination::completed;
  double duration = 0.0;
  /// Local-map confidences sampled at every planning iteration.
  ConfidenceHistogram histogram;
  GlobalConfidenceMap global;
  /// Executed (x, y, heading) after every simulation step, for replay.
  std::vector<Vec3> trajectory;
  /// Wall-clock runtime; not part of the serialized record.
  double wall_clock_s = 0.0;
};

/// Runs one episode. Throws ConfigError for an invalid config or a spawn
/// pose outside the arena or on hazardous ground. When `trace` is given,
/// one planner trace line is written per planning iteration.
MissionRecord run_episode(const GroundTruthTerrain& terrain, const MissionConfig& config,
                          const Spawn& spawn, std::uint64_t seed, std::ostream* trace = nullptr);

/// Executed poses of `record` that violate `limits` on `terrain`.
std::size_t replay_hazards(const MissionRecord& record, const GroundTruthTerrain& terrain,
                           const HazardLimits& limits, double robot_radius);

/// Newline-delimited JSON: one line per iteration, then a summary line.
void write_record(const MissionRecord& record, std::ostream& out);
/// Reads what write_record produced; the global map and trajectory are not
/// part of that format and stay empty.
MissionRecord read_record(std::istream& in);

}  // namespace terrex
