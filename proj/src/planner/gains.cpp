#include "terrex/planner/gains.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace terrex {

void GainSensor::validate() const {
  if (!(range > 0.0)) throw ConfigError("gain sensor range must be positive");
  if (!(min_elevation_deg < max_elevation_deg) || min_elevation_deg < -90.0 ||
      max_elevation_deg > 90.0)
    throw ConfigError("gain sensor field of view is invalid");
}

namespace {

bool in_view(const Vec3& d, const GainSensor& s) {
  if (d.squaredNorm() > s.range * s.range) return false;
  const double elev = rad2deg(std::atan2(d.z(), std::hypot(d.x(), d.y())));
  return elev >= s.min_elevation_deg && elev <= s.max_elevation_deg;
}

// Walks from the target back to the viewpoint so that voxels hidden under an
// observed surface are rejected after a few steps.
bool line_of_sight(const ExplorationGrid& grid, const Vec3& viewpoint, const Voxel& target) {
  const Voxel eye = grid.voxel_of(viewpoint);
  bool clear = true;
  grid.traverse(grid.center_of(target), viewpoint, [&](const Voxel& v) {
    if (v == target || v == eye) return true;
    if (grid.state(v) == VoxelState::occupied) {
      clear = false;
      return false;
    }
    return true;
  });
  return clear;
}

// Prefix sums of occupied voxels over a box of the grid. A segment's voxel
// walk never leaves the box spanned by its end voxels, so an empty box means
// nothing can block it.
class OccupiedCount {
 public:
  OccupiedCount(const ExplorationGrid& grid, const Voxel& lo, const Voxel& hi)
      : lo_(lo), n_(hi - lo + Voxel::Ones()),
        sums_(static_cast<std::size_t>(n_.x() + 1) * (n_.y() + 1) * (n_.z() + 1), 0) {
    for (int z = 0; z < n_.z(); ++z)
      for (int y = 0; y < n_.y(); ++y)
        for (int x = 0; x < n_.x(); ++x) {
          const int occ = grid.state(lo_ + Voxel(x, y, z)) == VoxelState::occupied ? 1 : 0;
          at(x + 1, y + 1, z + 1) = occ + at(x, y + 1, z + 1) + at(x + 1, y, z + 1) +
                                    at(x + 1, y + 1, z) - at(x, y, z + 1) - at(x, y + 1, z) -
                                    at(x + 1, y, z) + at(x, y, z);
        }
  }

  /// Occupied voxels in the inclusive box [a, b], clipped to the region.
  int count(const Voxel& a, const Voxel& b) const {
    const Voxel p = (a.cwiseMin(b) - lo_).cwiseMax(0);
    const Voxel q = (a.cwiseMax(b) - lo_ + Voxel::Ones()).cwiseMin(n_);
    if ((q.array() <= p.array()).any()) return 0;
    return at(q.x(), q.y(), q.z()) - at(p.x(), q.y(), q.z()) - at(q.x(), p.y(), q.z()) -
           at(q.x(), q.y(), p.z()) + at(p.x(), p.y(), q.z()) + at(p.x(), q.y(), p.z()) +
           at(q.x(), p.y(), p.z()) - at(p.x(), p.y(), p.z());
  }

 private:
  int& at(int x, int y, int z) { return sums_[index(x, y, z)]; }
  int at(int x, int y, int z) const { return sums_[index(x, y, z)]; }
  std::size_t index(int x, int y, int z) const {
    return (static_cast<std::size_t>(z) * (n_.y() + 1) + y) * (n_.x() + 1) + x;
  }

  Voxel lo_, n_;
  std::vector<int> sums_;
};

}  // namespace

bool voxel_visible(const ExplorationGrid& grid, const Vec3& viewpoint, const Voxel& v,
                   const GainSensor& sensor) {
  if (!in_view(grid.center_of(v) - viewpoint, sensor)) return false;
  return line_of_sight(grid, viewpoint, v);
}

double volumetric_gain(const ExplorationGrid& grid, const Vec3& viewpoint,
                       const GainSensor& sensor) {
  const double s = grid.voxel_size();
  const Vec3& lo = grid.min_corner();
  const Voxel& dims = grid.dims();
  const double r = sensor.range;
  const double tan_lo = std::tan(deg2rad(sensor.min_elevation_deg));
  const double tan_hi = std::tan(deg2rad(sensor.max_elevation_deg));

  const int x0 = std::max(0, static_cast<int>(std::floor((viewpoint.x() - r - lo.x()) / s)));
  const int x1 = std::min(dims.x() - 1, static_cast<int>(std::floor((viewpoint.x() + r - lo.x()) / s)));
  const int y0 = std::max(0, static_cast<int>(std::floor((viewpoint.y() - r - lo.y()) / s)));
  const int y1 = std::min(dims.y() - 1, static_cast<int>(std::floor((viewpoint.y() + r - lo.y()) / s)));

  if (x0 > x1 || y0 > y1) return 0.0;
  const Voxel eye = grid.voxel_of(viewpoint);
  const OccupiedCount occupied(grid, Voxel(x0, y0, 0), Voxel(x1, y1, dims.z() - 1));
  const int eye_occupied = grid.state(eye) == VoxelState::occupied ? 1 : 0;
  auto sees = [&](const Voxel& v) {
    return occupied.count(v, eye) == eye_occupied || line_of_sight(grid, viewpoint, v);
  };

  std::size_t count = 0;
  for (int ix = x0; ix <= x1; ++ix) {
    const double dx = lo.x() + (ix + 0.5) * s - viewpoint.x();
    for (int iy = y0; iy <= y1; ++iy) {
      const double dy = lo.y() + (iy + 0.5) * s - viewpoint.y();
      const double rxy = std::hypot(dx, dy);
      if (rxy > r) continue;
      const double vert = std::sqrt(std::max(0.0, r * r - rxy * rxy));
      const double dz_lo = std::max(-vert, rxy * tan_lo);
      const double dz_hi = std::min(vert, rxy * tan_hi);
      // One voxel of slack on each side; in_view() makes the exact call.
      const int z0 = std::max(0, static_cast<int>(std::floor((viewpoint.z() + dz_lo - lo.z()) / s - 0.5)) - 1);
      const int z1 = std::min(dims.z() - 1, static_cast<int>(std::ceil((viewpoint.z() + dz_hi - lo.z()) / s - 0.5)) + 1);
      for (int iz = z0; iz <= z1; ++iz) {
        const Voxel v(ix, iy, iz);
        if (grid.state(v) != VoxelState::unknown) continue;
        const double dz = lo.z() + (iz + 0.5) * s - viewpoint.z();
        // Cheap pre-filter with a margin well above rounding; borderline
        // voxels fall through to the exact test.
        if (dz < dz_lo - 1e-6 || dz > dz_hi + 1e-6) continue;
        const bool inside = dz > dz_lo + 1e-6 && dz < dz_hi - 1e-6;
        if (inside ? sees(v) : in_view(grid.center_of(v) - viewpoint, sensor) && sees(v))
          ++count;
      }
    }
  }
  return static_cast<double>(count) * grid.voxel_volume();
}

double confidence_gain(std::span<const double> confidences, double threshold, double beta) {
  double g = 1.0;
  for (double c : confidences) {
    if (!(c >= 0.0 && c <= 1.0)) throw InvariantViolation("vertex confidence outside [0, 1]");
    const double term = c >= threshold ? 1.0 : std::exp(beta * (threshold - c));
    g = std::max(g, term);
  }
  return g;
}

}  // namespace terrex
