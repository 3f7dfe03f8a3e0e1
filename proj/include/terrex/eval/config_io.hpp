#pragma once

#include "terrex/mission/episode.hpp"
#include "terrex/world/terrain.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace terrex {

struct ArenaSpec {
  std::string id;
  TerrainConfig terrain;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<ArenaSpec> arenas;
  std::vector<PlannerVariant> variants{PlannerVariant::baseline_gbp, PlannerVariant::only_trav,
                                       PlannerVariant::full};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  MissionConfig mission;
  double curve_dt = 10.0;
  double histogram_tail = 0.05;

  void validate() const;
};

/// Parsers reject unknown keys and wrongly typed values with ConfigError.
/// Missing keys keep their defaults.
TerrainConfig terrain_from_json(const nlohmann::json& j);
MissionConfig mission_from_json(const nlohmann::json& j, MissionConfig base = {});
/// Arena entries give either an inline "terrain" object or a "terrain_file"
/// path, resolved against `base_dir`.
ExperimentConfig experiment_from_json(const nlohmann::json& j,
                                      const std::filesystem::path& base_dir = {});

nlohmann::json load_json_file(const std::filesystem::path& path);
ExperimentConfig load_experiment(const std::filesystem::path& path);
TerrainConfig load_terrain(const std::filesystem::path& path);

}  // namespace terrex
