#include "terrex/planner/local_graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace terrex {

int LocalGraph::add_vertex(Vertex v) {
  v.id = static_cast<int>(vertices_.size());
  vertices_.push_back(v);
  adjacency_.emplace_back();
  return v.id;
}

void LocalGraph::add_edge(int a, int b) {
  const int n = static_cast<int>(vertices_.size());
  if (a < 0 || b < 0 || a >= n || b >= n || a == b)
    throw InvariantViolation("edge endpoints must be distinct existing vertices");
  if (connected(a, b)) return;
  const double len = (vertices_[a].position - vertices_[b].position).norm();
  edges_.push_back({a, b, len});
  adjacency_[a].emplace_back(b, len);
  adjacency_[b].emplace_back(a, len);
}

bool LocalGraph::connected(int a, int b) const {
  for (const auto& [n, len] : adjacency_[a])
    if (n == b) return true;
  return false;
}

int LocalGraph::nearest(const Vec3& p) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Vertex& v : vertices_) {
    const double d = (v.position - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = v.id;
    }
  }
  return best;
}

std::vector<int> LocalGraph::within(const Vec3& p, double radius) const {
  std::vector<int> out;
  const double r2 = radius * radius;
  for (const Vertex& v : vertices_)
    if ((v.position - p).squaredNorm() <= r2) out.push_back(v.id);
  return out;
}

ShortestPathTree dijkstra(const LocalGraph& graph, int source) {
  const std::size_t n = graph.size();
  ShortestPathTree t;
  t.distance.assign(n, std::numeric_limits<double>::infinity());
  t.parent.assign(n, -1);
  if (source < 0 || static_cast<std::size_t>(source) >= n) return t;

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  t.distance[source] = 0.0;
  open.emplace(0.0, source);
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > t.distance[u]) continue;
    for (const auto& [v, w] : graph.neighbors(u)) {
      const double nd = d + w;
      if (nd < t.distance[v]) {
        t.distance[v] = nd;
        t.parent[v] = u;
        open.emplace(nd, v);
      }
    }
  }
  return t;
}

std::vector<CandidatePath> shortest_paths(const LocalGraph& graph) {
  std::vector<CandidatePath> out;
  if (graph.size() == 0) return out;
  const ShortestPathTree tree = dijkstra(graph, 0);
  for (std::size_t v = 1; v < graph.size(); ++v) {
    if (tree.parent[v] < 0) continue;
    CandidatePath p;
    p.length = tree.distance[v];
    for (int u = static_cast<int>(v); u >= 0; u = tree.parent[u]) p.vertices.push_back(u);
    std::reverse(p.vertices.begin(), p.vertices.end());
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace terrex
