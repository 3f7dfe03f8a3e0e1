#pragma once

#include "terrex/common.hpp"

#include <utility>
#include <vector>

namespace terrex {

struct Vertex {
  int id = 0;
  Vec3 position = Vec3::Zero();
  double heading = 0.0;
  double confidence = 0.0;
  CellIndex cell;
};

struct Edge {
  int a = 0;
  int b = 0;
  double length = 0.0;
};

/// Undirected graph of sampled robot states; vertex 0 is the root.
class LocalGraph {
 public:
  int add_vertex(Vertex v);
  /// Adds an undirected edge weighted by the Euclidean vertex distance.
  void add_edge(int a, int b);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::vector<Vertex>& vertices() { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::pair<int, double>>& neighbors(int v) const { return adjacency_[v]; }
  bool connected(int a, int b) const;
  std::size_t size() const { return vertices_.size(); }

  /// Vertex closest to `p` (3D distance), first one on ties; -1 if empty.
  int nearest(const Vec3& p) const;
  /// Every vertex within `radius` of `p`, in id order.
  std::vector<int> within(const Vec3& p, double radius) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

struct ShortestPathTree {
  std::vector<double> distance;  ///< +inf when unreachable
  std::vector<int> parent;       ///< -1 for the source and unreachable vertices
};

ShortestPathTree dijkstra(const LocalGraph& graph, int source);

struct CandidatePath {
  std::vector<int> vertices;  ///< root first
  double length = 0.0;
  double volumetric_gain = 0.0;
  double confidence_gain = 1.0;
  double gain = 0.0;
};

/// One shortest path from the root to each other reachable vertex, in
/// vertex-id order.
std::vector<CandidatePath> shortest_paths(const LocalGraph& graph);

}  // namespace terrex
