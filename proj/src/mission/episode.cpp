#include "terrex/mission/episode.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>

namespace terrex {

void MissionConfig::validate() const {
  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
  if (!(sim_dt > 0.0)) throw ConfigError("simulation step must be positive");
  if (!(scan_period >= sim_dt) || !(plan_period >= sim_dt))
    throw ConfigError("scan and plan periods must be at least one simulation step");
  if (!(map_resolution > 0.0)) throw ConfigError("map resolution must be positive");
  if (local_map_size < 3 || local_map_size % 2 == 0)
    throw ConfigError("local map size must be odd and at least 3");
  if (!(speed > 0.0)) throw ConfigError("speed must be positive");
  if (!(sensor_height > 0.0)) throw ConfigError("sensor height must be positive");
  if (stranded_limit < 1) throw ConfigError("stranded limit must be at least 1");
  if (!(start_patch_half_extent >= 0.0) || !(start_patch_variance >= 0.0))
    throw ConfigError("start patch must have non-negative size and variance");
  if (!(voxel_size > 0.0) || !(voxel_headroom > 0.0))
    throw ConfigError("voxel size and headroom must be positive");
  if (!(hazard.max_slope_deg > 0.0) || !(hazard.max_step > 0.0))
    throw ConfigError("hazard limits must be positive");
  sensor.validate();
  traversability.validate();
  planner.validate();
  battery.validate();
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::tipped_over: return "tipped_over";
    case Termination::stranded: return "stranded";
  }
  return "?";
}

Termination parse_termination(std::string_view s) {
  if (s == "completed") return Termination::completed;
  if (s == "tipped_over") return Termination::tipped_over;
  if (s == "stranded") return Termination::stranded;
  throw ConfigError("unknown termination '" + std::string(s) + "'");
}

namespace {

long steps_of(double period, double dt) {
  return std::max(1L, std::lround(period / dt));
}

void snapshot_histogram(ConfidenceHistogram& hist, const ElevationMap& map) {
  const int n = map.geometry().local_size;
  for (int wi = 0; wi < n; ++wi)
    for (int wj = 0; wj < n; ++wj) {
      const ElevationCell& c = map.window_cell(wi, wj);
      if (c.initialized) hist.add(c.confidence);
    }
}

}  // namespace

MissionRecord run_episode(const GroundTruthTerrain& terrain, const MissionConfig& config,
                          const Spawn& spawn, std::uint64_t seed, std::ostream* trace) {
  const auto wall_start = std::chrono::steady_clock::now();
  config.validate();
  const double r = config.planner.robot_radius;
  if (!(spawn.position.x() >= r && spawn.position.y() >= r &&
        spawn.position.x() <= terrain.extent_x() - r && spawn.position.y() <= terrain.extent_y() - r))
    throw ConfigError("spawn pose lies outside the arena");

  RobotState robot;
  robot.position = Vec3(spawn.position.x(), spawn.position.y(),
                        terrain.height(spawn.position.x(), spawn.position.y()));
  robot.heading = spawn.heading;
  robot.speed = config.speed;
  robot.radius = r;
  if (hazard_check(robot, terrain, config.hazard) != Hazard::safe)
    throw ConfigError("spawn pose is on hazardous ground");

  const GridGeometry geometry = GridGeometry::for_arena(
      terrain.extent_x(), terrain.extent_y(), config.map_resolution, config.local_map_size);
  ElevationMap map(geometry);
  TraversabilityMap trav(geometry, config.traversability);
  ExplorationGrid grid =
      ExplorationGrid::for_terrain(terrain, config.voxel_size, config.voxel_headroom);

  MissionRecord record;
  record.global = GlobalConfidenceMap(geometry);

  map.recenter(spawn.position);
  map.initialize_patch(spawn.position, config.start_patch_half_extent, robot.position.z(),
                       config.start_patch_variance);

  Rng rng(seed);
  const long total_steps = std::lround(config.duration / config.sim_dt);
  const long scan_every = steps_of(config.scan_period, config.sim_dt);
  const long plan_every = steps_of(config.plan_period, config.sim_dt);

  std::optional<PathSegment> segment;
  int failed_plans = 0;
  std::vector<HeightObservation> observations;
  record.trajectory.push_back({robot.position.x(), robot.position.y(), robot.heading});

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.sim_dt;
    if (k >= total_steps) {
      record.termination = Termination::completed;
      record.duration = t;
      break;
    }

    if (k % scan_every == 0) {
      const SensorPose pose = sensor_pose_on_terrain(terrain, robot.position.x(), robot.position.y(),
                                                     robot.heading, config.sensor_height);
      const Scan scan = simulate_scan(terrain, pose, config.sensor, rng);
      map.recenter(robot.position.head<2>());
      observations.clear();
      for (const RangeMeasurement& m : scan.points)
        if (auto obs = project_measurement(m, pose, geometry)) observations.push_back(*obs);
      map.ingest(observations);
      grid.integrate_scan(scan, pose, config.sensor.max_range);
    }

    if (k % plan_every == 0) {
      trav.refresh(map, map.take_touched());
      fold_into_global(record.global, map);
      snapshot_histogram(record.histogram, map);

      const PlanResult plan =
          plan_local(robot.position, robot.heading, {map, trav, grid}, config.planner, rng);
      if (trace != nullptr) *trace << plan_trace(plan, t) << '\n';

      IterationRecord it;
      it.t = t;
      it.position = robot.position;
      it.heading = robot.heading;
      it.soc = soc_at(t, config.battery);
      it.explored_volume = grid.explored_volume();
      switch (plan.status) {
        case PlanResult::Status::ok: {
          const Vertex& next = plan.graph.vertices()[plan.executed->vertices[1]];
          segment = PathSegment{robot.position.head<2>(), next.position.head<2>()};
          failed_plans = 0;
          it.event = "plan";
          break;
        }
        case PlanResult::Status::no_gain:
          segment.reset();
          it.event = "idle";
          break;
        case PlanResult::Status::root_blocked:
        case PlanResult::Status::no_samples:
          segment.reset();
          ++failed_plans;
          it.event = "no_path";
          break;
      }
      if (failed_plans >= config.stranded_limit) {
        it.event = "stranded";
        record.iterations.push_back(std::move(it));
        record.termination = Termination::stranded;
        record.duration = t;
        break;
      }
      record.iterations.push_back(std::move(it));
    }

    if (segment) {
      robot = step_execute(robot, *segment, config.sim_dt, terrain);
      if ((robot.position.head<2>() - segment->to).norm() == 0.0) segment.reset();
    }
    record.trajectory.push_back({robot.position.x(), robot.position.y(), robot.heading});

    if (hazard_check(robot, terrain, config.hazard) == Hazard::tipped_over) {
      const double t_end = static_cast<double>(k + 1) * config.sim_dt;
      IterationRecord it;
      it.t = t_end;
      it.position = robot.position;
      it.heading = robot.heading;
      it.soc = soc_at(t_end, config.battery);
      it.explored_volume = grid.explored_volume();
      it.event = "tipped_over";
      record.iterations.push_back(std::move(it));
      record.termination = Termination::tipped_over;
      record.duration = t_end;
      break;
    }
  }
  record.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return record;
}

std::size_t replay_hazards(const MissionRecord& record, const GroundTruthTerrain& terrain,
                           const HazardLimits& limits, double robot_radius) {
  std::size_t n = 0;
  RobotState s;
  s.radius = robot_radius;
  for (const Vec3& p : record.trajectory) {
    s.position = Vec3(p.x(), p.y(), terrain.height(p.x(), p.y()));
    s.heading = p.z();
    if (hazard_check(s, terrain, limits) != Hazard::safe) ++n;
  }
  return n;
}

void write_record(const MissionRecord& record, std::ostream& out) {
  using nlohmann::ordered_json;
  for (const IterationRecord& it : record.iterations) {
    ordered_json j;
    j["type"] = "iteration";
    j["t"] = it.t;
    j["x"] = it.position.x();
    j["y"] = it.position.y();
    j["z"] = it.position.z();
    j["heading"] = it.heading;
    j["soc"] = it.soc;
    j["explored_volume"] = it.explored_volume;
    j["event"] = it.event;
    out << j.dump() << '\n';
  }
  ordered_json s;
  s["type"] = "summary";
  s["termination"] = to_string(record.termination);
  s["duration"] = record.duration;
  s["iterations"] = record.iterations.size();
  s["histogram"] = record.histogram.counts;
  out << s.dump() << '\n';
}

MissionRecord read_record(std::istream& in) {
  MissionRecord record;
  std::string line;
  bool summary = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "iteration") {
        IterationRecord it;
        it.t = j.at("t").get<double>();
        it.position = Vec3(j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>());
        it.heading = j.at("heading").get<double>();
        it.soc = j.at("soc").get<double>();
        it.explored_volume = j.at("explored_volume").get<double>();
        it.event = j.at("event").get<std::string>();
        record.iterations.push_back(std::move(it));
      } else if (type == "summary") {
        record.termination = parse_termination(j.at("termination").get<std::string>());
        record.duration = j.at("duration").get<double>();
        record.histogram.counts = j.at("histogram").get<std::array<std::uint64_t, 10>>();
        summary = true;
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed mission record: ") + e.what());
    }
  }
  if (!summary) throw ConfigError("mission record has no summary line");
  return record;
}

}  // namespace terrex
