#include "terrex/eval/config_io.hpp"

#include <fstream>
#include <set>

namespace terrex {

using nlohmann::json;

namespace {

// Reads optional keys from one JSON object and complains about leftovers.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
  }

  void get(const char* key, Vec2& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
      throw ConfigError(where_ + "." + key + ": expected [x, y]");
    out = Vec2((*it)[0].get<double>(), (*it)[1].get<double>());
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
  }

  const std::string& where() const { return where_; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

template <typename T, typename Fn>
std::vector<T> array_of(const json* j, const std::string& where, Fn&& parse) {
  std::vector<T> out;
  if (j == nullptr) return out;
  if (!j->is_array()) throw ConfigError(where + ": expected an array");
  for (std::size_t k = 0; k < j->size(); ++k)
    out.push_back(parse((*j)[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

FeatureField field_from_json(const json& j, const std::string& where) {
  FeatureField f;
  ObjectReader r(j, where);
  r.get("count", f.count);
  r.get("min_radius", f.min_radius);
  r.get("max_radius", f.max_radius);
  r.get("min_height", f.min_height);
  r.get("max_height", f.max_height);
  r.finish();
  return f;
}

}  // namespace

TerrainConfig terrain_from_json(const json& j) {
  TerrainConfig c;
  ObjectReader r(j, "terrain");
  r.get("extent_x", c.extent_x);
  r.get("extent_y", c.extent_y);
  r.get("resolution", c.resolution);
  r.get("seed", c.seed);
  if (const json* b = r.child("base")) {
    ObjectReader br(*b, "terrain.base");
    br.get("amplitude", c.base.amplitude);
    br.get("wavelength", c.base.wavelength);
    br.get("components", c.base.components);
    br.finish();
  }
  c.craters = array_of<Crater>(r.child("craters"), "terrain.craters", [](const json& e, const std::string& w) {
    Crater x;
    ObjectReader er(e, w);
    er.get("center", x.center);
    er.get("radius", x.radius);
    er.get("depth", x.depth);
    er.finish();
    return x;
  });
  c.rocks = array_of<Rock>(r.child("rocks"), "terrain.rocks", [](const json& e, const std::string& w) {
    Rock x;
    ObjectReader er(e, w);
    er.get("center", x.center);
    er.get("radius", x.radius);
    er.get("height", x.height);
    er.finish();
    return x;
  });
  c.ridges = array_of<Ridge>(r.child("ridges"), "terrain.ridges", [](const json& e, const std::string& w) {
    Ridge x;
    ObjectReader er(e, w);
    er.get("point", x.point);
    er.get("heading_deg", x.heading_deg);
    er.get("slope_deg", x.slope_deg);
    er.get("height", x.height);
    er.finish();
    return x;
  });
  c.ramps = array_of<Ramp>(r.child("ramps"), "terrain.ramps", [](const json& e, const std::string& w) {
    Ramp x;
    ObjectReader er(e, w);
    er.get("origin", x.origin);
    er.get("heading_deg", x.heading_deg);
    er.get("slope_deg", x.slope_deg);
    er.get("rise", x.rise);
    er.finish();
    return x;
  });
  if (const json* f = r.child("crater_field")) c.crater_field = field_from_json(*f, "terrain.crater_field");
  if (const json* f = r.child("rock_field")) c.rock_field = field_from_json(*f, "terrain.rock_field");
  c.spawn_zones = array_of<SpawnZone>(r.child("spawn_zones"), "terrain.spawn_zones",
                                      [](const json& e, const std::string& w) {
                                        SpawnZone z;
                                        ObjectReader er(e, w);
                                        er.get("center", z.center);
                                        er.get("radius", z.radius);
                                        er.finish();
                                        return z;
                                      });
  r.finish();
  return c;
}

MissionConfig mission_from_json(const json& j, MissionConfig m) {
  ObjectReader r(j, "mission");
  r.get("duration", m.duration);
  r.get("sim_dt", m.sim_dt);
  r.get("scan_period", m.scan_period);
  r.get("plan_period", m.plan_period);
  r.get("speed", m.speed);
  r.get("sensor_height", m.sensor_height);
  r.get("stranded_limit", m.stranded_limit);
  r.get("start_patch_half_extent", m.start_patch_half_extent);
  r.get("start_patch_variance", m.start_patch_variance);
  r.get("map_resolution", m.map_resolution);
  r.get("local_map_size", m.local_map_size);
  r.get("voxel_size", m.voxel_size);
  r.get("voxel_headroom", m.voxel_headroom);
  if (const json* s = r.child("sensor")) {
    ObjectReader sr(*s, "mission.sensor");
    SensorModel& x = m.sensor;
    sr.get("rings", x.rings);
    sr.get("min_elevation_deg", x.min_elevation_deg);
    sr.get("max_elevation_deg", x.max_elevation_deg);
    sr.get("azimuth_steps", x.azimuth_steps);
    sr.get("max_range", x.max_range);
    sr.get("min_range", x.min_range);
    sr.get("range_noise_std", x.range_noise_std);
    sr.get("range_noise_per_m", x.range_noise_per_m);
    sr.get("lateral_noise_std", x.lateral_noise_std);
    sr.get("angular_noise_std", x.angular_noise_std);
    sr.get("beam_divergence", x.beam_divergence);
    sr.get("march_step", x.march_step);
    sr.get("tolerance", x.tolerance);
    sr.finish();
  }
  if (const json* s = r.child("traversability")) {
    ObjectReader sr(*s, "mission.traversability");
    TraversabilityParams& x = m.traversability;
    sr.get("slope_weight", x.slope_weight);
    sr.get("roughness_weight", x.roughness_weight);
    sr.get("step_weight", x.step_weight);
    sr.get("critical_slope_deg", x.critical_slope_deg);
    sr.get("critical_roughness", x.critical_roughness);
    sr.get("critical_step", x.critical_step);
    sr.get("max_cost", x.max_cost);
    sr.get("half_width", x.half_width);
    sr.finish();
  }
  if (const json* s = r.child("planner")) {
    ObjectReader sr(*s, "mission.planner");
    PlannerParams& x = m.planner;
    sr.get("robot_radius", x.robot_radius);
    sr.get("confidence_threshold", x.confidence_threshold);
    sr.get("beta", x.beta);
    sr.get("vertex_budget", x.vertex_budget);
    sr.get("rejection_budget", x.rejection_budget);
    sr.get("connection_radius", x.connection_radius);
    sr.get("edge_check_step", x.edge_check_step);
    sr.get("viewpoint_height", x.viewpoint_height);
    sr.get("optimize_path", x.optimize_path);
    if (const json* g = sr.child("gain_sensor")) {
      ObjectReader gr(*g, "mission.planner.gain_sensor");
      gr.get("range", x.gain_sensor.range);
      gr.get("min_elevation_deg", x.gain_sensor.min_elevation_deg);
      gr.get("max_elevation_deg", x.gain_sensor.max_elevation_deg);
      gr.finish();
    }
    sr.finish();
  }
  if (const json* s = r.child("hazard")) {
    ObjectReader sr(*s, "mission.hazard");
    sr.get("max_slope_deg", m.hazard.max_slope_deg);
    sr.get("max_step", m.hazard.max_step);
    sr.finish();
  }
  if (const json* s = r.child("battery")) {
    ObjectReader sr(*s, "mission.battery");
    sr.get("capacity_ah", m.battery.capacity_ah);
    sr.get("initial_capacity_ah", m.battery.initial_capacity_ah);
    sr.get("current_a", m.battery.current_a);
    sr.finish();
  }
  r.finish();
  return m;
}

void ExperimentConfig::validate() const {
  if (arenas.empty()) throw ConfigError("experiment has no arenas");
  if (variants.empty()) throw ConfigError("experiment has no variants");
  if (seeds.empty()) throw ConfigError("experiment has no seeds");
  std::set<std::string> ids;
  for (const ArenaSpec& a : arenas) {
    if (a.id.empty()) throw ConfigError("arena id must not be empty");
    if (!ids.insert(a.id).second) throw ConfigError("duplicate arena id '" + a.id + "'");
  }
  if (!(curve_dt > 0.0)) throw ConfigError("curve_dt must be positive");
  if (!(histogram_tail > 0.0 && histogram_tail < 1.0))
    throw ConfigError("histogram_tail must lie in (0, 1)");
  mission.validate();
}

ExperimentConfig experiment_from_json(const json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  ObjectReader r(j, "experiment");
  r.get("name", c.name);
  r.get("seeds", c.seeds);
  int trials = -1;
  r.get("trials", trials);
  r.get("curve_dt", c.curve_dt);
  r.get("histogram_tail", c.histogram_tail);
  if (const json* v = r.child("variants")) {
    std::vector<std::string> names;
    try {
      names = v->get<std::vector<std::string>>();
    } catch (const json::exception&) {
      throw ConfigError("experiment.variants: expected an array of names");
    }
    c.variants.clear();
    for (const std::string& n : names) c.variants.push_back(parse_variant(n));
  }
  c.arenas = array_of<ArenaSpec>(r.child("arenas"), "experiment.arenas",
                                 [&](const json& e, const std::string& w) {
                                   ArenaSpec a;
                                   ObjectReader ar(e, w);
                                   ar.get("id", a.id);
                                   std::string file;
                                   ar.get("terrain_file", file);
                                   const json* inline_terrain = ar.child("terrain");
                                   ar.finish();
                                   if (inline_terrain != nullptr && !file.empty())
                                     throw ConfigError(w + ": give either terrain or terrain_file");
                                   if (inline_terrain != nullptr) {
                                     a.terrain = terrain_from_json(*inline_terrain);
                                   } else if (!file.empty()) {
                                     a.terrain = load_terrain(base_dir / file);
                                   } else {
                                     throw ConfigError(w + ": missing terrain");
                                   }
                                   return a;
                                 });
  if (const json* m = r.child("mission")) c.mission = mission_from_json(*m);
  r.finish();
  if (trials >= 0) {
    if (trials == 0) throw ConfigError("trials must be positive");
    if (static_cast<std::size_t>(trials) > c.seeds.size())
      throw ConfigError("trials exceeds the number of seeds");
    c.seeds.resize(static_cast<std::size_t>(trials));
  }
  return c;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return experiment_from_json(load_json_file(path), path.parent_path());
}

TerrainConfig load_terrain(const std::filesystem::path& path) {
  return terrain_from_json(load_json_file(path));
}

}  // namespace terrex
