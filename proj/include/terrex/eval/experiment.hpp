#pragma once

#include "terrex/eval/config_io.hpp"
#include "terrex/eval/metrics.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace terrex {

/// Spawn pose for a trial seed. Depends only on the terrain and the seed,
/// so every variant starts from the same pose. Positions are drawn inside the
/// arena's spawn zones (the arena centre when it has none) and must pass the
/// hazard check.
Spawn spawn_for_seed(const TerrainConfig& config, const GroundTruthTerrain& terrain,
                     std::uint64_t seed, const MissionConfig& mission);

struct TrialResult {
  std::string arena;
  PlannerVariant variant = PlannerVariant::full;
  std::uint64_t seed = 0;
  std::string error;  ///< non-empty when the trial could not run
  MissionRecord record;

  bool ran() const { return error.empty(); }
};

TrialResult run_trial(const ArenaSpec& arena, const GroundTruthTerrain& terrain,
                      const MissionConfig& mission, PlannerVariant variant, std::uint64_t seed,
                      std::ostream* trace = nullptr);

/// Every (arena, variant, seed) combination in config order.
std::vector<TrialResult> run_trials(const ExperimentConfig& config,
                                    const std::function<void(const TrialResult&)>& on_done = {});

struct VariantRow {
  std::string arena;
  PlannerVariant variant = PlannerVariant::full;
  int trials = 0;
  int successes = 0;
  int errors = 0;
  std::optional<double> average_time;        ///< over trials that ran
  std::optional<double> low_confidence_pct;  ///< mean of per-trial ratios
  std::optional<double> derived_threshold;   ///< from the pooled histogram
  Curve curve;
};

struct MetricsReport {
  double lcr_threshold = 0.8;
  double histogram_tail = 0.05;
  std::vector<VariantRow> rows;
  std::vector<TrialResult> trials;  ///< sorted by arena, variant, seed
};

/// Folds trial results into per-(arena, variant) rows. The result does not
/// depend on the order of `trials`.
MetricsReport aggregate(std::vector<TrialResult> trials, const ExperimentConfig& config);

const VariantRow* find_row(const MetricsReport& report, const std::string& arena,
                           PlannerVariant variant);

std::string report_json(const MetricsReport& report);
void write_summary_csv(const MetricsReport& report, std::ostream& out);
void write_curve_csv(const VariantRow& row, std::ostream& out);

}  // namespace terrex
