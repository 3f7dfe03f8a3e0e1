#pragma once

#include "terrex/planner/footprint.hpp"
#include "terrex/planner/gains.hpp"
#include "terrex/planner/local_graph.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace terrex {

struct PlannerParams {
  double robot_radius = 0.3;
  double confidence_threshold = 0.8;
  double beta = 2.0;
  int vertex_budget = 200;
  int rejection_budget = 1000;
  double connection_radius = 2.0;
  double edge_check_step = 0.0;  ///< 0 selects half the map resolution
  GainSensor gain_sensor;
  double viewpoint_height = 0.8;  ///< sensor height above a vertex

  bool traversability_sampling = true;  ///< footprint gate on samples, edges and root
  bool confidence_gain = true;          ///< multiply g_vol by g_conf
  bool optimize_path = true;

  void validate() const;
};

enum class PlannerVariant { baseline_gbp, only_trav, full };

std::string_view to_string(PlannerVariant v);
PlannerVariant parse_variant(std::string_view name);
/// Sets the two toggles that distinguish the variants.
void apply_variant(PlannerParams& params, PlannerVariant v);

/// Read-only view of the maps a planning iteration works on.
struct PlanningContext {
  const ElevationMap& map;
  const TraversabilityMap& trav;
  const ExplorationGrid& grid;
};

struct SamplingBox {
  Vec2 min = Vec2::Zero();
  Vec2 max = Vec2::Zero();
};

/// Local window minus a robot-radius margin, clipped to the arena.
SamplingBox sampling_box(const ElevationMap& map, double margin);

/// Draws uniform positions in `box` until one is accepted or the rejection
/// budget runs out. With the gate on, acceptance is the footprint check;
/// without it, any position over an observed cell is accepted.
std::optional<Vertex> sample_traversable_vertex(const ElevationMap& map, FootprintChecker* gate,
                                                const SamplingBox& box, int rejection_budget,
                                                Rng& rng);

struct GraphBuild {
  enum class Status { ok, root_blocked, no_samples };
  Status status = Status::ok;
  LocalGraph graph;
};

/// RRG construction around the robot: each accepted sample links to its
/// nearest vertex and then to every vertex within the connection radius,
/// each edge subject to the corridor check.
GraphBuild build_local_graph(const Vec3& robot_position, double robot_heading,
                             const PlanningContext& ctx, const PlannerParams& params,
                             FootprintChecker* gate, Rng& rng);

/// C_v <- max(C_v, current confidence at the vertex cell).
void update_vertex_confidence(LocalGraph& graph, const ElevationMap& map);

/// Shortcuts the path greedily: from each kept vertex jump to the furthest
/// later vertex whose straight corridor passes the check.
CandidatePath optimize_path(const CandidatePath& path, const LocalGraph& graph,
                            FootprintChecker* gate, double step);

/// Index of the candidate with the largest positive combined gain, the first
/// one on ties; -1 when no gain is positive.
int select_best(std::span<const CandidatePath> candidates);

struct PlanResult {
  enum class Status { ok, root_blocked, no_samples, no_gain };
  Status status = Status::no_gain;
  LocalGraph graph;
  std::vector<CandidatePath> candidates;  ///< with gains filled in
  std::optional<CandidatePath> best;      ///< selected path before shortcutting
  std::optional<CandidatePath> executed;  ///< after OptimizePath
};

std::string_view to_string(PlanResult::Status s);

/// One local exploration iteration.
PlanResult plan_local(const Vec3& robot_position, double robot_heading,
                      const PlanningContext& ctx, const PlannerParams& params, Rng& rng);

/// One-line JSON trace of an iteration (graph, per-path gains, selection).
std::string plan_trace(const PlanResult& result, double t);

}  // namespace terrex
