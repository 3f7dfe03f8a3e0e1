#include "terrex/eval/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace terrex {

Spawn spawn_for_seed(const TerrainConfig& config, const GroundTruthTerrain& terrain,
                     std::uint64_t seed, const MissionConfig& mission) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RobotState probe;
  probe.radius = mission.planner.robot_radius;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Spawn s;
    if (config.spawn_zones.empty()) {
      s.position = Vec2(0.5 * terrain.extent_x(), 0.5 * terrain.extent_y());
    } else {
      const auto zone_count = static_cast<std::uint64_t>(config.spawn_zones.size());
      const SpawnZone& z = config.spawn_zones[rng() % zone_count];
      const double rho = 0.5 * z.radius * std::sqrt(unit(rng));
      const double a = 2.0 * kPi * unit(rng);
      s.position = z.center + rho * Vec2(std::cos(a), std::sin(a));
    }
    s.heading = 2.0 * kPi * unit(rng) - kPi;
    probe.position = Vec3(s.position.x(), s.position.y(), terrain.height(s.position.x(), s.position.y()));
    if (terrain.contains(s.position.x(), s.position.y()) &&
        hazard_check(probe, terrain, mission.hazard) == Hazard::safe)
      return s;
  }
  throw ConfigError("no hazard-free spawn pose found");
}

TrialResult run_trial(const ArenaSpec& arena, const GroundTruthTerrain& terrain,
                      const MissionConfig& mission, PlannerVariant variant, std::uint64_t seed,
                      std::ostream* trace) {
  TrialResult r;
  r.arena = arena.id;
  r.variant = variant;
  r.seed = seed;
  try {
    MissionConfig m = mission;
    apply_variant(m.planner, variant);
    const Spawn spawn = spawn_for_seed(arena.terrain, terrain, seed, m);
    r.record = run_episode(terrain, m, spawn, seed, trace);
  } catch (const ConfigError& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<TrialResult> run_trials(const ExperimentConfig& config,
                                    const std::function<void(const TrialResult&)>& on_done) {
  config.validate();
  std::vector<TrialResult> out;
  for (const ArenaSpec& arena : config.arenas) {
    const GroundTruthTerrain terrain = generate_terrain(arena.terrain, arena.terrain.seed);
    for (PlannerVariant v : config.variants)
      for (std::uint64_t seed : config.seeds) {
        out.push_back(run_trial(arena, terrain, config.mission, v, seed));
        if (on_done) on_done(out.back());
      }
  }
  return out;
}

MetricsReport aggregate(std::vector<TrialResult> trials, const ExperimentConfig& config) {
  MetricsReport report;
  report.lcr_threshold = config.mission.planner.confidence_threshold;
  report.histogram_tail = config.histogram_tail;

  std::map<std::string, std::size_t> arena_rank;
  for (std::size_t k = 0; k < config.arenas.size(); ++k) arena_rank[config.arenas[k].id] = k;
  auto rank = [&](const TrialResult& t) {
    auto it = arena_rank.find(t.arena);
    return std::make_tuple(it == arena_rank.end() ? arena_rank.size() : it->second, t.arena,
                           static_cast<int>(t.variant), t.seed);
  };
  std::stable_sort(trials.begin(), trials.end(),
                   [&](const TrialResult& a, const TrialResult& b) { return rank(a) < rank(b); });

  for (std::size_t k = 0; k < trials.size();) {
    std::size_t end = k;
    while (end < trials.size() && trials[end].arena == trials[k].arena &&
           trials[end].variant == trials[k].variant)
      ++end;
    VariantRow row;
    row.arena = trials[k].arena;
    row.variant = trials[k].variant;
    double time_sum = 0.0, lcr_sum = 0.0;
    int ran = 0, lcr_n = 0;
    ConfidenceHistogram pooled;
    std::vector<Curve> curves;
    for (std::size_t i = k; i < end; ++i) {
      const TrialResult& t = trials[i];
      ++row.trials;
      if (!t.ran()) {
        ++row.errors;
        continue;
      }
      ++ran;
      if (t.record.termination == Termination::completed) ++row.successes;
      time_sum += t.record.duration;
      if (auto lcr = low_confidence_ratio(t.record.global, report.lcr_threshold)) {
        lcr_sum += *lcr;
        ++lcr_n;
      }
      pooled.merge(t.record.histogram);
      curves.push_back(exploration_curve(t.record, config.curve_dt, config.mission.duration));
    }
    if (ran > 0) row.average_time = time_sum / ran;
    if (lcr_n > 0) row.low_confidence_pct = lcr_sum / lcr_n;
    if (pooled.total() > 0) row.derived_threshold = derive_threshold(pooled, config.histogram_tail);
    row.curve = average_curves(curves);
    report.rows.push_back(std::move(row));
    k = end;
  }
  report.trials = std::move(trials);
  return report;
}

const VariantRow* find_row(const MetricsReport& report, const std::string& arena,
                           PlannerVariant variant) {
  for (const VariantRow& r : report.rows)
    if (r.arena == arena && r.variant == variant) return &r;
  return nullptr;
}

std::string report_json(const MetricsReport& report) {
  using nlohmann::ordered_json;
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json j;
  j["schema"] = 1;
  j["lcr_threshold"] = report.lcr_threshold;
  j["histogram_tail"] = report.histogram_tail;
  ordered_json rows = ordered_json::array();
  for (const VariantRow& r : report.rows) {
    ordered_json o;
    o["arena"] = r.arena;
    o["variant"] = to_string(r.variant);
    o["trials"] = r.trials;
    o["successes"] = r.successes;
    o["errors"] = r.errors;
    o["success_rate"] = std::to_string(r.successes) + "/" + std::to_string(r.trials);
    o["average_time_s"] = opt(r.average_time);
    o["low_confidence_pct"] = opt(r.low_confidence_pct);
    o["derived_threshold"] = opt(r.derived_threshold);
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  ordered_json trials = ordered_json::array();
  for (const TrialResult& t : report.trials) {
    ordered_json o;
    o["arena"] = t.arena;
    o["variant"] = to_string(t.variant);
    o["seed"] = t.seed;
    if (t.ran()) {
      o["termination"] = to_string(t.record.termination);
      o["duration"] = t.record.duration;
      o["low_confidence_pct"] = opt(low_confidence_ratio(t.record.global, report.lcr_threshold));
      o["final_explored_volume"] =
          t.record.iterations.empty() ? 0.0 : t.record.iterations.back().explored_volume;
    } else {
      o["error"] = t.error;
    }
    trials.push_back(std::move(o));
  }
  j["trials"] = std::move(trials);
  return j.dump(2);
}

void write_summary_csv(const MetricsReport& report, std::ostream& out) {
  auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string();
    std::ostringstream s;
    s << std::setprecision(10) << *v;
    return s.str();
  };
  out << "# schema=1\n";
  out << "arena,variant,trials,successes,errors,average_time_s,low_confidence_pct,derived_threshold\n";
  for (const VariantRow& r : report.rows)
    out << r.arena << ',' << to_string(r.variant) << ',' << r.trials << ',' << r.successes << ','
        << r.errors << ',' << opt(r.average_time) << ',' << opt(r.low_confidence_pct) << ','
        << opt(r.derived_threshold) << '\n';
}

void write_curve_csv(const VariantRow& row, std::ostream& out) {
  out << "# schema=1 arena=" << row.arena << " variant=" << to_string(row.variant) << '\n';
  out << "t,explored_volume_m3\n";
  out << std::setprecision(10);
  for (const auto& [t, v] : row.curve) out << t << ',' << v << '\n';
}

}  // namespace terrex
