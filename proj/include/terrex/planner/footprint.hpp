#pragma once

#include "terrex/traversability/attributes.hpp"

#include <vector>

namespace terrex {

/// Lattice offsets inside the robot disc: F = ceil(r/delta) and
/// {(di, dj) : di^2 + dj^2 <= F^2}, ordered by (di, dj).
std::vector<CellIndex> footprint_offsets(double robot_radius, double resolution);

/// Footprint and corridor acceptance against the current traversability
/// layer. Per-cell verdicts are memoized for the lifetime of the checker,
/// which must not outlive a single planning iteration.
class FootprintChecker {
 public:
  FootprintChecker(const ElevationMap& map, const TraversabilityMap& trav,
                   std::vector<CellIndex> offsets);

  /// Every footprint cell around `center` is valid with cost <= max_cost.
  bool cell_ok(CellIndex center);
  bool point_ok(const Vec2& p);
  /// Footprint check at samples spaced at most `step` apart along [a, b],
  /// both endpoints included.
  bool corridor_ok(const Vec2& a, const Vec2& b, double step);

  const std::vector<CellIndex>& offsets() const { return offsets_; }

 private:
  const ElevationMap& map_;
  const TraversabilityMap& trav_;
  std::vector<CellIndex> offsets_;
  CellIndex origin_;
  int size_;
  std::vector<std::int8_t> memo_;  // -1 unknown, 0 rejected, 1 accepted
};

}  // namespace terrex
