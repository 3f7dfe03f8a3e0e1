#include "terrex/planner/planner.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

using namespace terrex;

namespace {

// Fully observed map of `h` over a square arena, with traversability ready.
struct Scene {
  GridGeometry geometry;
  ElevationMap map;
  TraversabilityMap trav;
  ExplorationGrid grid;

  Scene(double extent, double resolution, int local_size, const std::function<double(double, double)>& h)
      : geometry(GridGeometry::for_arena(extent, extent, resolution, local_size)),
        map(geometry),
        trav(geometry, TraversabilityParams{}),
        grid(Vec3(0, 0, -2), Vec3(extent, extent, 4), 0.4) {
    map.recenter(Vec2(extent / 2, extent / 2));
    std::vector<HeightObservation> obs;
    for (int i = 0; i < geometry.rows; ++i)
      for (int j = 0; j < geometry.cols; ++j) {
        const Vec2 c = geometry.center_of({i, j});
        obs.push_back({{i, j}, h(c.x(), c.y()), 0.01});
      }
    map.ingest(obs);
    trav.refresh(map, map.take_touched());
  }

  PlanningContext context() const { return {map, trav, grid}; }
};

std::vector<CellIndex> lattice_disc(double r, double delta) {
  std::vector<CellIndex> out;
  const int f = static_cast<int>(std::ceil(r / delta - 1e-9));
  for (int di = -f - 2; di <= f + 2; ++di)
    for (int dj = -f - 2; dj <= f + 2; ++dj)
      if (di * di + dj * dj <= f * f) out.push_back({di, dj});
  return out;
}

// Shortest simple-path length by exhaustive DFS, summed from the source.
void exhaustive(const std::vector<std::vector<double>>& w, int at, double acc,
                std::vector<bool>& seen, std::vector<double>& best) {
  best[at] = std::min(best[at], acc);
  seen[at] = true;
  for (std::size_t n = 0; n < w.size(); ++n)
    if (!seen[n] && std::isfinite(w[at][n])) exhaustive(w, static_cast<int>(n), acc + w[at][n], seen, best);
  seen[at] = false;
}

// Visibility by dense sampling of the segment; independent of the voxel walk.
bool sampled_visible(const ExplorationGrid& grid, const Vec3& eye, const Voxel& v, const GainSensor& s) {
  const Vec3 c = grid.center_of(v);
  const Vec3 d = c - eye;
  if (d.norm() > s.range) return false;
  const double elev = rad2deg(std::asin(d.z() / d.norm()));
  if (elev < s.min_elevation_deg || elev > s.max_elevation_deg) return false;
  // Exact slab test of the eye-to-centre segment against every occupied box.
  const Voxel e = grid.voxel_of(eye);
  const Voxel dims = grid.dims();
  for (int x = 0; x < dims.x(); ++x)
    for (int y = 0; y < dims.y(); ++y)
      for (int z = 0; z < dims.z(); ++z) {
        const Voxel w(x, y, z);
        if (w == v || w == e || grid.state(w) != VoxelState::occupied) continue;
        const Vec3 lo = grid.center_of(w) - Vec3::Constant(0.5 * grid.voxel_size());
        double t0 = 0.0, t1 = 1.0;
        for (int a = 0; a < 3 && t0 < t1; ++a) {
          const double hi_a = lo(a) + grid.voxel_size();
          if (d(a) == 0.0) {
            if (eye(a) < lo(a) || eye(a) > hi_a) t1 = -1.0;
            continue;
          }
          double ta = (lo(a) - eye(a)) / d(a), tb = (hi_a - eye(a)) / d(a);
          if (ta > tb) std::swap(ta, tb);
          t0 = std::max(t0, ta);
          t1 = std::min(t1, tb);
        }
        if (t1 - t0 > 1e-9) return false;
      }
  return true;
}

}  // namespace

TEST_CASE("footprint offsets match a brute-force lattice count") {
  const auto offsets = footprint_offsets(0.3, 0.1);
  CHECK(offsets.size() == 29);
  CHECK(offsets == lattice_disc(0.3, 0.1));
  for (double r : {0.05, 0.25, 0.5, 0.77})
    for (double d : {0.05, 0.1, 0.2}) CHECK(footprint_offsets(r, d) == lattice_disc(r, d));
  CHECK(footprint_offsets(0.1, 0.1).size() == 5);
  CHECK_THROWS_AS(footprint_offsets(0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(footprint_offsets(0.3, -0.1), ConfigError);
}

TEST_CASE("confidence gain") {
  const std::vector<double> confident = {0.9, 0.95, 1.0, 0.8};
  CHECK(confidence_gain(confident, 0.8, 2.0) == 1.0);
  const std::vector<double> one_low = {1.0, 0.6, 0.9};
  CHECK(std::abs(confidence_gain(one_low, 0.8, 2.0) - std::exp(0.4)) < 1e-12);
  const std::vector<double> two_low = {0.7, 0.5};
  CHECK(confidence_gain(two_low, 0.8, 2.0) == doctest::Approx(std::exp(0.6)));
  CHECK(confidence_gain({}, 0.8, 2.0) == 1.0);
  const std::vector<double> bad = {1.2};
  CHECK_THROWS_AS(confidence_gain(bad, 0.8, 2.0), InvariantViolation);

  // Lowering the minimum never lowers the gain.
  double prev = 0.0;
  for (double c = 1.0; c >= 0.0; c -= 0.05) {
    const std::vector<double> path = {0.95, c};
    const double g = confidence_gain(path, 0.8, 2.0);
    CHECK(g >= prev);
    prev = g;
  }
  CHECK(combined_gain(10.0, 1.4918) == doctest::Approx(14.918));
  CHECK(combined_gain(0.0, 5.0) == 0.0);
}

TEST_CASE("selection is strict, first wins, and ignores scale") {
  std::vector<CandidatePath> c(3);
  c[0].gain = 2.0;
  c[1].gain = 3.0;
  c[2].gain = 3.0;
  CHECK(select_best(c) == 1);
  for (auto& p : c) p.gain = 0.0;
  CHECK(select_best(c) == -1);
  CHECK(select_best({}) == -1);

  Rng rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0), conf(0.0, 1.0), scale(0.01, 100.0);
  for (int k = 0; k < 100; ++k) {
    std::vector<CandidatePath> paths(12);
    std::vector<double> gconf;
    for (auto& p : paths) {
      p.volumetric_gain = u(rng);
      const std::vector<double> cs = {conf(rng), conf(rng)};
      p.confidence_gain = confidence_gain(cs, 0.8, 2.0);
      p.gain = combined_gain(p.volumetric_gain, p.confidence_gain);
    }
    const int ref = select_best(paths);
    const double s = scale(rng);
    for (auto& p : paths) p.gain = combined_gain(p.volumetric_gain * s, p.confidence_gain);
    CHECK(select_best(paths) == ref);
  }

  // Equal volumetric gain: the path over a low-confidence vertex wins.
  std::vector<CandidatePath> two(2);
  const std::vector<double> high = {1.0, 0.9}, low = {1.0, 0.5};
  two[0].gain = combined_gain(5.0, confidence_gain(high, 0.8, 2.0));
  two[1].gain = combined_gain(5.0, confidence_gain(low, 0.8, 2.0));
  CHECK(select_best(two) == 1);
}

TEST_CASE("graph basics") {
  LocalGraph g;
  Vertex v;
  v.position = Vec3(0, 0, 0);
  CHECK(g.add_vertex(v) == 0);
  v.position = Vec3(3, 4, 0);
  CHECK(g.add_vertex(v) == 1);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  CHECK(g.edges().size() == 1);
  CHECK(g.edges()[0].length == 5.0);
  CHECK(g.connected(0, 1));
  CHECK_THROWS(g.add_edge(0, 7));
  CHECK(g.nearest(Vec3(2, 3, 0)) == 1);
  CHECK(g.within(Vec3(0, 0, 0), 5.0) == std::vector<int>{0, 1});
  CHECK(g.within(Vec3(0, 0, 0), 4.9) == std::vector<int>{0});
}

TEST_CASE("dijkstra matches exhaustive enumeration") {
  Rng rng(11);
  std::uniform_int_distribution<int> size(2, 8);
  std::uniform_real_distribution<double> coord(0.0, 5.0), coin(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    LocalGraph g;
    for (int k = 0; k < n; ++k) {
      Vertex v;
      v.position = Vec3(coord(rng), coord(rng), coord(rng));
      g.add_vertex(v);
    }
    for (int k = 1; k < n; ++k) g.add_edge(k, std::uniform_int_distribution<int>(0, k - 1)(rng));
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (coin(rng) < 0.3) g.add_edge(a, b);

    std::vector<std::vector<double>> w(n, std::vector<double>(n, INFINITY));
    for (const Edge& e : g.edges()) w[e.a][e.b] = w[e.b][e.a] = e.length;

    std::vector<bool> seen(n, false);
    std::vector<double> ref(n, INFINITY);
    exhaustive(w, 0, 0.0, seen, ref);
    const ShortestPathTree tree = dijkstra(g, 0);
    const auto paths = shortest_paths(g);
    REQUIRE(paths.size() == static_cast<std::size_t>(n - 1));
    for (int t = 1; t < n; ++t) {
      CHECK(tree.distance[t] == ref[t]);
      const CandidatePath& p = paths[t - 1];
      CHECK(p.vertices.front() == 0);
      CHECK(p.vertices.back() == t);
      double len = 0.0;
      for (std::size_t k = 1; k < p.vertices.size(); ++k) len += w[p.vertices[k - 1]][p.vertices[k]];
      CHECK(len == ref[t]);
      CHECK(p.length == ref[t]);
    }
  }
}

TEST_CASE("volumetric gain examples") {
  ExplorationGrid grid(Vec3(0, 0, 0), Vec3(4, 4, 4), 1.0);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z) grid.set(Voxel(x, y, z), VoxelState::free);
  GainSensor s;
  s.range = 10.0;
  s.min_elevation_deg = -90.0;
  s.max_elevation_deg = 90.0;
  const Vec3 eye(1.5, 1.5, 1.5);
  CHECK(volumetric_gain(grid, eye, s) == 0.0);

  ExplorationGrid adj(Vec3(0, 0, 0), Vec3(3, 1, 1), 0.5);
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        if (!(x == 1 && y == 0 && z == 0)) adj.set(Voxel(x, y, z), VoxelState::free);
  CHECK(volumetric_gain(adj, Vec3(0.25, 0.25, 0.25), s) == doctest::Approx(adj.voxel_volume()));
}

TEST_CASE("volumetric gain matches a brute-force visibility oracle") {
  Rng rng(21);
  std::uniform_int_distribution<int> cell(0, 19);
  std::uniform_real_distribution<double> jitter(-0.37, 0.37);
  for (int trial = 0; trial < 3; ++trial) {
    ExplorationGrid grid(Vec3(0, 0, 0), Vec3(20, 20, 20), 1.0);
    for (int k = 0; k < 400; ++k) grid.set(Voxel(cell(rng), cell(rng), cell(rng)), VoxelState::occupied);
    for (int k = 0; k < 800; ++k) {
      const Voxel v(cell(rng), cell(rng), cell(rng));
      if (grid.state(v) == VoxelState::unknown) grid.set(v, VoxelState::free);
    }
    const Vec3 eye(10.0 + jitter(rng), 10.0 + jitter(rng), 10.0 + jitter(rng));
    grid.set(grid.voxel_of(eye), VoxelState::free);
    GainSensor s;
    s.range = 9.0 + trial;
    s.min_elevation_deg = -25.0 - 10 * trial;
    s.max_elevation_deg = 15.0;

    std::size_t count = 0, walked = 0;
    for (int x = 0; x < 20; ++x)
      for (int y = 0; y < 20; ++y)
        for (int z = 0; z < 20; ++z) {
          const Voxel v(x, y, z);
          if (grid.state(v) != VoxelState::unknown) continue;
          const bool vis = sampled_visible(grid, eye, v, s);
          count += vis;
          walked += voxel_visible(grid, eye, v, s);
        }
    CHECK(count > 0);
    CHECK(walked == count);
    CHECK(volumetric_gain(grid, eye, s) == doctest::Approx(count * grid.voxel_volume()));
  }
}

TEST_CASE("voxel walk visits a connected chain from start to end") {
  ExplorationGrid grid(Vec3(0, 0, 0), Vec3(10, 10, 10), 0.5);
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int k = 0; k < 200; ++k) {
    const Vec3 a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng));
    std::vector<Voxel> seen;
    grid.traverse(a, b, [&](const Voxel& v) {
      seen.push_back(v);
      return true;
    });
    REQUIRE(!seen.empty());
    CHECK(seen.front() == grid.voxel_of(a));
    CHECK(seen.back() == grid.voxel_of(b));
    for (std::size_t i = 1; i < seen.size(); ++i) CHECK((seen[i] - seen[i - 1]).cwiseAbs().sum() == 1);
  }
}

TEST_CASE("exploration grid integration") {
  ExplorationGrid grid(Vec3(0, 0, 0), Vec3(4, 4, 4), 1.0);
  grid.integrate_hit(Vec3(0.5, 0.5, 0.5), Vec3(3.5, 0.5, 0.5));
  CHECK(grid.state(Voxel(0, 0, 0)) == VoxelState::free);
  CHECK(grid.state(Voxel(2, 0, 0)) == VoxelState::free);
  CHECK(grid.state(Voxel(3, 0, 0)) == VoxelState::occupied);
  CHECK(grid.known_count() == 4);
  grid.integrate_miss(Vec3(0.5, 0.5, 0.5), Vec3(3.5, 0.5, 0.5));
  CHECK(grid.state(Voxel(3, 0, 0)) == VoxelState::occupied);
  CHECK(grid.explored_volume() == 4.0);
}

TEST_CASE("flat arena grows a fully connected graph") {
  Scene scene(12.0, 0.1, 101, [](double, double) { return 0.0; });
  PlannerParams p;
  p.vertex_budget = 50;
  Rng rng(1);
  FootprintChecker gate(scene.map, scene.trav, footprint_offsets(p.robot_radius, 0.1));
  const GraphBuild b = build_local_graph(Vec3(6, 6, 0), 0.0, scene.context(), p, &gate, rng);
  CHECK(b.status == GraphBuild::Status::ok);
  CHECK(b.graph.size() == 51);
  const ShortestPathTree tree = dijkstra(b.graph, 0);
  for (std::size_t v = 1; v < b.graph.size(); ++v) CHECK(std::isfinite(tree.distance[v]));

  p.vertex_budget = 0;
  const GraphBuild empty = build_local_graph(Vec3(6, 6, 0), 0.0, scene.context(), p, &gate, rng);
  CHECK(empty.graph.size() == 1);
  CHECK(empty.status == GraphBuild::Status::no_samples);
}

TEST_CASE("no edge crosses a wall") {
  const auto wall = [](double x, double) { return x > 5.9 && x < 6.1 ? 1.0 : 0.0; };
  Scene scene(12.0, 0.1, 101, wall);
  PlannerParams p;
  p.vertex_budget = 150;
  Rng rng(7);
  FootprintChecker gate(scene.map, scene.trav, footprint_offsets(p.robot_radius, 0.1));
  const GraphBuild b = build_local_graph(Vec3(3, 6, 0), 0.0, scene.context(), p, &gate, rng);
  REQUIRE(b.graph.size() > 10);
  const auto offsets = lattice_disc(p.robot_radius, 0.1);
  for (const Vertex& v : b.graph.vertices()) CHECK(v.position.x() < 6.0);
  for (const Edge& e : b.graph.edges()) {
    const Vec2 a = b.graph.vertices()[e.a].position.head<2>();
    const Vec2 c = b.graph.vertices()[e.b].position.head<2>();
    const int n = static_cast<int>(std::ceil((c - a).norm() / 0.01)) + 1;
    for (int k = 0; k <= n; ++k) {
      const Vec2 q = a + (c - a) * (static_cast<double>(k) / n);
      CHECK(std::abs(q.x() - 6.0) > 0.1 + p.robot_radius - 0.1);
    }
  }
}

TEST_CASE("root on hazardous ground blocks the gated planner") {
  Scene scene(12.0, 0.1, 101, [](double x, double y) { return std::hypot(x - 6, y - 6) < 0.2 ? 0.8 : 0.0; });
  PlannerParams p;
  p.vertex_budget = 5;
  Rng rng(1);
  PlanResult r = plan_local(Vec3(6, 6, 0), 0.0, scene.context(), p, rng);
  CHECK(r.status == PlanResult::Status::root_blocked);
  apply_variant(p, PlannerVariant::baseline_gbp);
  r = plan_local(Vec3(6, 6, 0), 0.0, scene.context(), p, rng);
  CHECK(r.status == PlanResult::Status::ok);
}

TEST_CASE("plan on flat ground shortcuts to the terminal") {
  Scene scene(12.0, 0.1, 101, [](double, double) { return 0.0; });
  PlannerParams p;
  p.vertex_budget = 40;
  p.gain_sensor.range = 4.0;
  Rng rng(9);
  const PlanResult r = plan_local(Vec3(6, 6, 0), 0.0, scene.context(), p, rng);
  REQUIRE(r.status == PlanResult::Status::ok);
  REQUIRE(r.best);
  REQUIRE(r.executed);
  CHECK(r.executed->vertices.size() == 2);
  CHECK(r.executed->vertices.back() == r.best->vertices.back());
  for (const auto& c : r.candidates) CHECK(c.confidence_gain == 1.0);

  const std::string trace = plan_trace(r, 3.0);
  CHECK(trace.find("\"status\":\"ok\"") != std::string::npos);
  CHECK(trace.find('\n') == std::string::npos);
}

TEST_CASE("every explored voxel known means no gain") {
  Scene scene(8.0, 0.1, 61, [](double, double) { return 0.0; });
  for (int x = 0; x < scene.grid.dims().x(); ++x)
    for (int y = 0; y < scene.grid.dims().y(); ++y)
      for (int z = 0; z < scene.grid.dims().z(); ++z) scene.grid.set(Voxel(x, y, z), VoxelState::free);
  PlannerParams p;
  p.vertex_budget = 10;
  Rng rng(1);
  CHECK(plan_local(Vec3(4, 4, 0), 0.0, scene.context(), p, rng).status == PlanResult::Status::no_gain);
}

TEST_CASE("vertex confidence only rises") {
  const GridGeometry g = GridGeometry::for_arena(4, 4, 0.5, 9);
  ElevationMap map(g);
  map.recenter(Vec2(2, 2));
  LocalGraph graph;
  Vertex v;
  v.cell = {4, 4};
  v.confidence = 0.6;
  graph.add_vertex(v);
  v.cell = {5, 5};
  v.confidence = 0.95;
  graph.add_vertex(v);
  const std::vector<HeightObservation> obs = {{{4, 4}, 0.0, 0.1}, {{5, 5}, 0.0, 0.3}};
  map.ingest(obs);
  update_vertex_confidence(graph, map);
  CHECK(graph.vertices()[0].confidence == doctest::Approx(0.9));
  CHECK(graph.vertices()[1].confidence == 0.95);
  update_vertex_confidence(graph, map);
  CHECK(graph.vertices()[0].confidence == doctest::Approx(0.9));
}

TEST_CASE("variants differ only in the two toggles") {
  PlannerParams p;
  apply_variant(p, PlannerVariant::baseline_gbp);
  CHECK_FALSE(p.traversability_sampling);
  CHECK_FALSE(p.confidence_gain);
  apply_variant(p, PlannerVariant::only_trav);
  CHECK(p.traversability_sampling);
  CHECK_FALSE(p.confidence_gain);
  apply_variant(p, PlannerVariant::full);
  CHECK(p.traversability_sampling);
  CHECK(p.confidence_gain);
  for (auto v : {PlannerVariant::baseline_gbp, PlannerVariant::only_trav, PlannerVariant::full})
    CHECK(parse_variant(to_string(v)) == v);
  CHECK_THROWS_AS(parse_variant("gbp"), ConfigError);
}
