#include "terrex/eval/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct CliError : std::runtime_error {
  CliError(std::string kind, const std::string& what)
      : std::runtime_error(what), kind(std::move(kind)) {}
  std::string kind;
};

int report_error(const std::string& kind, const std::string& message, int code) {
  ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  return code;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw terrex::ConfigError("invalid seed '" + item + "'");
    }
  }
  if (out.empty()) throw terrex::ConfigError("seed list is empty");
  return out;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw CliError("io_error", "cannot write " + p.string());
  return out;
}

std::string trial_stem(const terrex::TrialResult& t) {
  return t.arena + "_" + std::string(terrex::to_string(t.variant)) + "_" + std::to_string(t.seed);
}

void write_outputs(const terrex::MetricsReport& report, const fs::path& out) {
  fs::create_directories(out / "curves");
  open_out(out / "report.json") << terrex::report_json(report) << '\n';
  auto summary = open_out(out / "summary.csv");
  terrex::write_summary_csv(report, summary);
  for (const terrex::VariantRow& row : report.rows) {
    auto f = open_out(out / "curves" /
                      (row.arena + "_" + std::string(terrex::to_string(row.variant)) + ".csv"));
    terrex::write_curve_csv(row, f);
  }
}

struct RunOptions {
  std::string config;
  std::string out;
  std::string seed_list;
  std::vector<std::string> variants;
  std::vector<std::string> arenas;
  int trials = 0;
  bool trace = false;
};

int cmd_run(const RunOptions& o) {
  terrex::ExperimentConfig cfg = terrex::load_experiment(o.config);
  if (!o.seed_list.empty()) cfg.seeds = parse_seed_list(o.seed_list);
  if (o.trials > 0) {
    if (static_cast<std::size_t>(o.trials) > cfg.seeds.size())
      throw terrex::ConfigError("--trials exceeds the number of seeds");
    cfg.seeds.resize(static_cast<std::size_t>(o.trials));
  }
  if (!o.variants.empty()) {
    cfg.variants.clear();
    for (const std::string& v : o.variants) cfg.variants.push_back(terrex::parse_variant(v));
  }
  if (!o.arenas.empty()) {
    std::vector<terrex::ArenaSpec> keep;
    for (const std::string& id : o.arenas) {
      auto it = std::find_if(cfg.arenas.begin(), cfg.arenas.end(),
                             [&](const terrex::ArenaSpec& a) { return a.id == id; });
      if (it == cfg.arenas.end()) throw terrex::ConfigError("unknown arena '" + id + "'");
      keep.push_back(*it);
    }
    cfg.arenas = std::move(keep);
  }
  cfg.validate();

  const fs::path out = o.out;
  fs::create_directories(out / "records");
  if (o.trace) fs::create_directories(out / "traces");

  ordered_json manifest;
  manifest["schema"] = 1;
  manifest["name"] = cfg.name;
  manifest["duration"] = cfg.mission.duration;
  manifest["curve_dt"] = cfg.curve_dt;
  manifest["histogram_tail"] = cfg.histogram_tail;
  manifest["lcr_threshold"] = cfg.mission.planner.confidence_threshold;
  manifest["arenas"] = ordered_json::array();
  for (const auto& a : cfg.arenas) manifest["arenas"].push_back(a.id);
  manifest["trials"] = ordered_json::array();

  std::vector<terrex::TrialResult> results;
  for (const terrex::ArenaSpec& arena : cfg.arenas) {
    const terrex::GroundTruthTerrain terrain = terrex::generate_terrain(arena.terrain, arena.terrain.seed);
    for (terrex::PlannerVariant v : cfg.variants)
      for (std::uint64_t seed : cfg.seeds) {
        std::ofstream trace;
        terrex::TrialResult probe;
        probe.arena = arena.id;
        probe.variant = v;
        probe.seed = seed;
        const std::string stem = trial_stem(probe);
        if (o.trace) trace = open_out(out / "traces" / (stem + ".ndjson"));
        terrex::TrialResult r =
            terrex::run_trial(arena, terrain, cfg.mission, v, seed, o.trace ? &trace : nullptr);
        ordered_json entry;
        entry["arena"] = r.arena;
        entry["variant"] = terrex::to_string(r.variant);
        entry["seed"] = r.seed;
        if (r.ran()) {
          auto rec = open_out(out / "records" / (stem + ".ndjson"));
          terrex::write_record(r.record, rec);
          auto glob = open_out(out / "records" / (stem + "_global.csv"));
          terrex::write_global_confidence_csv(r.record.global, glob);
          entry["record"] = "records/" + stem + ".ndjson";
          entry["global"] = "records/" + stem + "_global.csv";
          std::cerr << stem << ": " << terrex::to_string(r.record.termination) << " at "
                    << r.record.duration << " s (" << r.record.wall_clock_s << " s wall)\n";
        } else {
          entry["error"] = r.error;
          std::cerr << stem << ": error: " << r.error << '\n';
        }
        manifest["trials"].push_back(std::move(entry));
        results.push_back(std::move(r));
      }
  }
  open_out(out / "trials.json") << manifest.dump(2) << '\n';
  write_outputs(terrex::aggregate(std::move(results), cfg), out);
  std::cout << (out / "report.json").string() << '\n';
  return 0;
}

int cmd_metrics(const std::string& dir, const std::string& out_opt) {
  const fs::path root = dir;
  const json manifest = terrex::load_json_file(root / "trials.json");
  terrex::ExperimentConfig cfg;
  std::vector<terrex::TrialResult> results;
  try {
    cfg.mission.duration = manifest.at("duration").get<double>();
    cfg.curve_dt = manifest.at("curve_dt").get<double>();
    cfg.histogram_tail = manifest.at("histogram_tail").get<double>();
    cfg.mission.planner.confidence_threshold = manifest.at("lcr_threshold").get<double>();
    for (const auto& id : manifest.at("arenas")) cfg.arenas.push_back({id.get<std::string>(), {}});
    for (const auto& e : manifest.at("trials")) {
      terrex::TrialResult r;
      r.arena = e.at("arena").get<std::string>();
      r.variant = terrex::parse_variant(e.at("variant").get<std::string>());
      r.seed = e.at("seed").get<std::uint64_t>();
      if (e.contains("error")) {
        r.error = e.at("error").get<std::string>();
      } else {
        std::ifstream rec(root / e.at("record").get<std::string>());
        if (!rec) throw terrex::ConfigError("missing record for " + trial_stem(r));
        r.record = terrex::read_record(rec);
        std::ifstream glob(root / e.at("global").get<std::string>());
        if (!glob) throw terrex::ConfigError("missing global map for " + trial_stem(r));
        r.record.global = terrex::read_global_confidence_csv(glob);
      }
      results.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw terrex::ConfigError(std::string("malformed trials.json: ") + e.what());
  }
  const fs::path out = out_opt.empty() ? root : fs::path(out_opt);
  write_outputs(terrex::aggregate(std::move(results), cfg), out);
  std::cout << (out / "report.json").string() << '\n';
  return 0;
}

int cmd_terrain(const std::string& input, const std::string& arena_id, double resolution,
                const std::string& out) {
  const json j = terrex::load_json_file(input);
  terrex::TerrainConfig cfg;
  if (j.is_object() && j.contains("arenas")) {
    const terrex::ExperimentConfig exp = terrex::experiment_from_json(j, fs::path(input).parent_path());
    const terrex::ArenaSpec* pick = nullptr;
    for (const auto& a : exp.arenas)
      if (arena_id.empty() || a.id == arena_id) {
        pick = &a;
        break;
      }
    if (pick == nullptr) throw terrex::ConfigError("unknown arena '" + arena_id + "'");
    cfg = pick->terrain;
  } else {
    cfg = terrex::terrain_from_json(j);
  }
  const terrex::GroundTruthTerrain terrain = terrex::generate_terrain(cfg, cfg.seed);
  const double res = resolution > 0.0 ? resolution : cfg.resolution;
  if (out.empty() || out == "-") {
    terrex::export_heightfield_csv(terrain, res, std::cout);
  } else {
    if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
    auto f = open_out(out);
    terrex::export_heightfield_csv(terrain, res, f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Terrain exploration planner simulator"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write reports");
  run_cmd->add_option("config", run.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("output", run.out, "Output directory");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--seed-list", run.seed_list, "Comma-separated trial seeds");
  run_cmd->add_option("--variant", run.variants, "Planner variant(s) to run");
  run_cmd->add_option("--arena", run.arenas, "Arena id(s) to run");
  run_cmd->add_option("--trials", run.trials, "Use the first N seeds")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--trace", run.trace, "Write per-iteration planner traces");

  std::string metrics_dir, metrics_out;
  auto* metrics_cmd = app.add_subcommand("metrics", "Recompute reports from stored records");
  metrics_cmd->add_option("dir", metrics_dir, "Directory written by 'run'")->required();
  metrics_cmd->add_option("--out", metrics_out, "Output directory (default: input directory)");

  std::string terrain_in, terrain_arena, terrain_out;
  double terrain_res = 0.0;
  auto* terrain_cmd = app.add_subcommand("terrain", "Export a terrain heightfield as CSV");
  terrain_cmd->add_option("config", terrain_in, "Terrain or experiment config (JSON)")->required();
  terrain_cmd->add_option("--arena", terrain_arena, "Arena id when given an experiment config");
  terrain_cmd->add_option("--resolution", terrain_res, "Sample spacing in metres");
  terrain_cmd->add_option("--out", terrain_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage_error", e.what(), 64);
  }

  try {
    if (run_cmd->parsed()) {
      if (run.out.empty()) throw terrex::ConfigError("an output directory is required");
      return cmd_run(run);
    }
    if (metrics_cmd->parsed()) return cmd_metrics(metrics_dir, metrics_out);
    if (terrain_cmd->parsed()) return cmd_terrain(terrain_in, terrain_arena, terrain_res, terrain_out);
  } catch (const terrex::ConfigError& e) {
    return report_error("config_error", e.what(), 2);
  } catch (const terrex::InvariantViolation& e) {
    return report_error("invariant_violation", e.what(), 3);
  } catch (const CliError& e) {
    return report_error(e.kind, e.what(), 4);
  } catch (const fs::filesystem_error& e) {
    return report_error("io_error", e.what(), 4);
  } catch (const std::exception& e) {
    return report_error("internal_error", e.what(), 1);
  }
  return 0;
}
