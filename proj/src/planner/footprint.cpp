#include "terrex/planner/footprint.hpp"

#include <cmath>

namespace terrex {

std::vector<CellIndex> footprint_offsets(double robot_radius, double resolution) {
  if (!(robot_radius > 0.0) || !(resolution > 0.0))
    throw ConfigError("robot radius and resolution must be positive");
  // Guard against r/delta landing a hair above an integer (0.3/0.1 etc.).
  const int f = static_cast<int>(std::ceil(robot_radius / resolution - 1e-9));
  std::vector<CellIndex> out;
  for (int di = -f; di <= f; ++di)
    for (int dj = -f; dj <= f; ++dj)
      if (di * di + dj * dj <= f * f) out.push_back({di, dj});
  return out;
}

FootprintChecker::FootprintChecker(const ElevationMap& map, const TraversabilityMap& trav,
                                   std::vector<CellIndex> offsets)
    : map_(map),
      trav_(trav),
      offsets_(std::move(offsets)),
      origin_(map.window_origin()),
      size_(map.geometry().local_size),
      memo_(static_cast<std::size_t>(size_) * size_, -1) {}

bool FootprintChecker::cell_ok(CellIndex center) {
  const int wi = center.i - origin_.i;
  const int wj = center.j - origin_.j;
  if (wi < 0 || wj < 0 || wi >= size_ || wj >= size_) return false;
  std::int8_t& m = memo_[static_cast<std::size_t>(wi) * size_ + wj];
  if (m >= 0) return m == 1;
  bool ok = true;
  for (const CellIndex& o : offsets_) {
    if (!trav_.traversable(map_, {center.i + o.i, center.j + o.j})) {
      ok = false;
      break;
    }
  }
  m = ok ? 1 : 0;
  return ok;
}

bool FootprintChecker::point_ok(const Vec2& p) {
  return cell_ok(map_.geometry().index_of(p.x(), p.y()));
}

bool FootprintChecker::corridor_ok(const Vec2& a, const Vec2& b, double step) {
  const double len = (b - a).norm();
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int k = 0; k <= n; ++k) {
    const Vec2 p = a + (b - a) * (static_cast<double>(k) / n);
    if (!point_ok(p)) return false;
  }
  return true;
}

}  // namespace terrex
