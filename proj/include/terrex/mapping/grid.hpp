#pragma once

#include "terrex/common.hpp"

#include <cmath>

namespace terrex {

/// Floor mapping from map coordinates to integer cell indices.
inline CellIndex grid_index(double x, double y, double resolution) {
  return {static_cast<int>(std::floor(x / resolution)),
          static_cast<int>(std::floor(y / resolution))};
}

/// Geometry shared by the arena-wide cell store and the robot-centric window.
///
/// Grid axes are aligned with the map axes. `origin` is the map position of
/// the (0,0) cell corner; `rows` x `cols` cells cover the arena, and the local
/// window is `local_size` cells per side (odd, centred on the robot cell).
struct GridGeometry {
  double resolution = 0.1;
  int local_size = 151;
  Vec2 origin = Vec2::Zero();
  int rows = 0;
  int cols = 0;

  static GridGeometry for_arena(double extent_x, double extent_y, double resolution,
                                int local_size, Vec2 origin = Vec2::Zero()) {
    if (!(resolution > 0.0)) throw ConfigError("grid resolution must be positive");
    if (local_size < 1 || local_size % 2 == 0) throw ConfigError("local map size must be odd");
    GridGeometry g;
    g.resolution = resolution;
    g.local_size = local_size;
    g.origin = origin;
    g.rows = static_cast<int>(std::ceil(extent_x / resolution - 1e-9));
    g.cols = static_cast<int>(std::ceil(extent_y / resolution - 1e-9));
    return g;
  }

  CellIndex index_of(double x, double y) const {
    return grid_index(x - origin.x(), y - origin.y(), resolution);
  }
  Vec2 center_of(CellIndex c) const {
    return {origin.x() + (c.i + 0.5) * resolution, origin.y() + (c.j + 0.5) * resolution};
  }
  bool in_bounds(CellIndex c) const { return c.i >= 0 && c.j >= 0 && c.i < rows && c.j < cols; }
  int half_size() const { return local_size / 2; }
};

}  // namespace terrex
