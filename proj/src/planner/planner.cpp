#include "terrex/planner/planner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace terrex {

void PlannerParams::validate() const {
  if (!(robot_radius > 0.0)) throw ConfigError("robot radius must be positive");
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0))
    throw ConfigError("confidence threshold must lie in [0, 1]");
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  if (vertex_budget < 0) throw ConfigError("vertex budget must be non-negative");
  if (rejection_budget < 1) throw ConfigError("rejection budget must be at least 1");
  if (!(connection_radius > 0.0)) throw ConfigError("connection radius must be positive");
  if (edge_check_step < 0.0) throw ConfigError("edge check step must be non-negative");
  if (!(viewpoint_height >= 0.0)) throw ConfigError("viewpoint height must be non-negative");
  gain_sensor.validate();
}

std::string_view to_string(PlannerVariant v) {
  switch (v) {
    case PlannerVariant::baseline_gbp: return "baseline_gbp";
    case PlannerVariant::only_trav: return "only_trav";
    case PlannerVariant::full: return "full";
  }
  return "?";
}

PlannerVariant parse_variant(std::string_view name) {
  if (name == "baseline_gbp") return PlannerVariant::baseline_gbp;
  if (name == "only_trav") return PlannerVariant::only_trav;
  if (name == "full") return PlannerVariant::full;
  throw ConfigError("unknown planner variant '" + std::string(name) + "'");
}

void apply_variant(PlannerParams& params, PlannerVariant v) {
  params.traversability_sampling = v != PlannerVariant::baseline_gbp;
  params.confidence_gain = v == PlannerVariant::full;
}

std::string_view to_string(PlanResult::Status s) {
  switch (s) {
    case PlanResult::Status::ok: return "ok";
    case PlanResult::Status::root_blocked: return "root_blocked";
    case PlanResult::Status::no_samples: return "no_samples";
    case PlanResult::Status::no_gain: return "no_gain";
  }
  return "?";
}

SamplingBox sampling_box(const ElevationMap& map, double margin) {
  const GridGeometry& g = map.geometry();
  const CellIndex o = map.window_origin();
  const double span = g.local_size * g.resolution;
  const Vec2 lo = g.origin + Vec2(o.i, o.j) * g.resolution;
  SamplingBox box;
  box.min = (lo + Vec2::Constant(margin)).cwiseMax(g.origin + Vec2::Constant(margin));
  box.max = (lo + Vec2::Constant(span - margin))
                .cwiseMin(g.origin + Vec2(g.rows, g.cols) * g.resolution - Vec2::Constant(margin));
  return box;
}

namespace {

double vertex_confidence(const ElevationMap& map, CellIndex c) {
  const ElevationCell& cell = map.at(c);
  return cell.initialized ? cell.confidence : 0.0;
}

double edge_step(const ElevationMap& map, const PlannerParams& params) {
  return params.edge_check_step > 0.0 ? params.edge_check_step
                                      : 0.5 * map.geometry().resolution;
}

bool corridor(FootprintChecker* gate, const Vec3& a, const Vec3& b, double step) {
  return gate == nullptr || gate->corridor_ok(a.head<2>(), b.head<2>(), step);
}

}  // namespace

std::optional<Vertex> sample_traversable_vertex(const ElevationMap& map, FootprintChecker* gate,
                                                const SamplingBox& box, int rejection_budget,
                                                Rng& rng) {
  if (!(box.max.x() > box.min.x()) || !(box.max.y() > box.min.y())) return std::nullopt;
  std::uniform_real_distribution<double> ux(box.min.x(), box.max.x());
  std::uniform_real_distribution<double> uy(box.min.y(), box.max.y());
  for (int k = 0; k < rejection_budget; ++k) {
    const double x = ux(rng);
    const double y = uy(rng);
    const CellIndex c = map.geometry().index_of(x, y);
    const ElevationCell& cell = map.at(c);
    if (!cell.initialized) continue;
    if (gate != nullptr && !gate->cell_ok(c)) continue;
    Vertex v;
    v.position = Vec3(x, y, cell.elevation);
    v.cell = c;
    v.confidence = cell.confidence;
    return v;
  }
  return std::nullopt;
}

GraphBuild build_local_graph(const Vec3& robot_position, double robot_heading,
                             const PlanningContext& ctx, const PlannerParams& params,
                             FootprintChecker* gate, Rng& rng) {
  GraphBuild out;
  const ElevationMap& map = ctx.map;
  Vertex root;
  root.cell = map.geometry().index_of(robot_position.x(), robot_position.y());
  const ElevationCell& rc = map.at(root.cell);
  root.position = Vec3(robot_position.x(), robot_position.y(),
                       rc.initialized ? rc.elevation : robot_position.z());
  root.heading = robot_heading;
  root.confidence = vertex_confidence(map, root.cell);
  out.graph.add_vertex(root);
  if (gate != nullptr && !gate->cell_ok(root.cell)) {
    out.status = GraphBuild::Status::root_blocked;
    return out;
  }

  const SamplingBox box = sampling_box(map, params.robot_radius);
  const double step = edge_step(map, params);
  for (int k = 0; k < params.vertex_budget; ++k) {
    std::optional<Vertex> s = sample_traversable_vertex(map, gate, box, params.rejection_budget, rng);
    if (!s) break;
    const int near = out.graph.nearest(s->position);
    const Vertex& nv = out.graph.vertices()[near];
    if ((nv.position - s->position).head<2>().norm() == 0.0) continue;
    if (!corridor(gate, nv.position, s->position, step)) continue;
    const Vec3 d = s->position - nv.position;
    s->heading = std::atan2(d.y(), d.x());
    const int id = out.graph.add_vertex(*s);
    out.graph.add_edge(near, id);
    const Vec3 p = s->position;
    for (int u : out.graph.within(p, params.connection_radius)) {
      if (u == id || u == near) continue;
      if (corridor(gate, out.graph.vertices()[u].position, p, step)) out.graph.add_edge(u, id);
    }
  }
  if (out.graph.size() == 1) out.status = GraphBuild::Status::no_samples;
  return out;
}

void update_vertex_confidence(LocalGraph& graph, const ElevationMap& map) {
  for (Vertex& v : graph.vertices()) {
    const ElevationCell& cell = map.at(v.cell);
    if (cell.initialized) v.confidence = std::max(v.confidence, cell.confidence);
  }
}

CandidatePath optimize_path(const CandidatePath& path, const LocalGraph& graph,
                            FootprintChecker* gate, double step) {
  CandidatePath out = path;
  if (path.vertices.size() <= 2) return out;
  const auto& vs = graph.vertices();
  out.vertices.assign(1, path.vertices.front());
  out.length = 0.0;
  std::size_t i = 0;
  const std::size_t last = path.vertices.size() - 1;
  while (i < last) {
    std::size_t j = last;
    while (j > i + 1 &&
           !corridor(gate, vs[path.vertices[i]].position, vs[path.vertices[j]].position, step))
      --j;
    out.length += (vs[path.vertices[j]].position - vs[path.vertices[i]].position).norm();
    out.vertices.push_back(path.vertices[j]);
    i = j;
  }
  return out;
}

int select_best(std::span<const CandidatePath> candidates) {
  double best_gain = 0.0;
  int best = -1;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (candidates[k].gain > best_gain) {
      best_gain = candidates[k].gain;
      best = static_cast<int>(k);
    }
  return best;
}

PlanResult plan_local(const Vec3& robot_position, double robot_heading,
                      const PlanningContext& ctx, const PlannerParams& params, Rng& rng) {
  PlanResult result;
  std::optional<FootprintChecker> checker;
  if (params.traversability_sampling)
    checker.emplace(ctx.map, ctx.trav,
                    footprint_offsets(params.robot_radius, ctx.map.geometry().resolution));
  FootprintChecker* gate = checker ? &*checker : nullptr;

  GraphBuild build = build_local_graph(robot_position, robot_heading, ctx, params, gate, rng);
  result.graph = std::move(build.graph);
  if (build.status == GraphBuild::Status::root_blocked) {
    result.status = PlanResult::Status::root_blocked;
    return result;
  }
  if (build.status == GraphBuild::Status::no_samples) {
    result.status = PlanResult::Status::no_samples;
    return result;
  }
  update_vertex_confidence(result.graph, ctx.map);

  // Volumetric gain is evaluated once per vertex and read at path terminals.
  const auto& vs = result.graph.vertices();
  std::vector<double> vertex_gain(vs.size(), 0.0);
  for (std::size_t v = 1; v < vs.size(); ++v)
    vertex_gain[v] = volumetric_gain(
        ctx.grid, vs[v].position + Vec3(0.0, 0.0, params.viewpoint_height), params.gain_sensor);

  result.candidates = shortest_paths(result.graph);
  std::vector<double> conf;
  for (CandidatePath& p : result.candidates) {
    p.volumetric_gain = vertex_gain[p.vertices.back()];
    if (params.confidence_gain) {
      conf.clear();
      for (int v : p.vertices) conf.push_back(vs[v].confidence);
      p.confidence_gain = confidence_gain(conf, params.confidence_threshold, params.beta);
    } else {
      p.confidence_gain = 1.0;
    }
    p.gain = combined_gain(p.volumetric_gain, p.confidence_gain);
  }
  const int best = select_best(result.candidates);
  if (best < 0) {
    result.status = PlanResult::Status::no_gain;
    return result;
  }
  result.status = PlanResult::Status::ok;
  result.best = result.candidates[best];
  result.executed = params.optimize_path
                        ? optimize_path(*result.best, result.graph, gate, edge_step(ctx.map, params))
                        : *result.best;
  return result;
}

std::string plan_trace(const PlanResult& result, double t) {
  using nlohmann::json;
  json j;
  j["t"] = t;
  j["status"] = to_string(result.status);
  json vertices = json::array();
  for (const Vertex& v : result.graph.vertices())
    vertices.push_back({v.id, v.position.x(), v.position.y(), v.position.z(), v.confidence});
  j["vertices"] = std::move(vertices);
  json edges = json::array();
  for (const Edge& e : result.graph.edges()) edges.push_back({e.a, e.b});
  j["edges"] = std::move(edges);
  json paths = json::array();
  for (const CandidatePath& p : result.candidates)
    paths.push_back({{"terminal", p.vertices.back()},
                     {"length", p.length},
                     {"g_vol", p.volumetric_gain},
                     {"g_conf", p.confidence_gain},
                     {"g", p.gain}});
  j["paths"] = std::move(paths);
  j["best"] = result.best ? json(result.best->vertices) : json(nullptr);
  j["executed"] = result.executed ? json(result.executed->vertices) : json(nullptr);
  return j.dump();
}

}  // namespace terrex
