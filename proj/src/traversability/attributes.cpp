#include "terrex/traversability/attributes.hpp"

#include "terrex/traversability/symmetric_eigen3.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace terrex {

void TraversabilityParams::validate() const {
  for (double w : {slope_weight, roughness_weight, step_weight})
    if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("traversability weights must lie in [0, 1]");
  if (std::abs(slope_weight + roughness_weight + step_weight - 1.0) > 1e-9)
    throw ConfigError("traversability weights must sum to 1");
  if (!(critical_slope_deg > 0.0) || !(critical_roughness > 0.0) || !(critical_step > 0.0) ||
      !(max_cost > 0.0))
    throw ConfigError("traversability thresholds must be positive");
  if (half_width < 0) throw ConfigError("window half-width must be non-negative");
}

NeighborhoodWindow extract_window(const ElevationMap& map, CellIndex center, int half_width) {
  NeighborhoodWindow w;
  w.center = center;
  w.half_width = half_width;
  const int side = w.side();
  w.heights.resize(static_cast<std::size_t>(side) * side);
  w.complete = true;
  for (int m = 0; m < side; ++m)
    for (int l = 0; l < side; ++l) {
      const CellIndex c{center.i + m - half_width, center.j + l - half_width};
      const ElevationCell& cell = map.at(c);
      if (!map.in_window(c) || !cell.initialized) {
        w.complete = false;
        w.heights[static_cast<std::size_t>(m) * side + l] = 0.0;
      } else {
        w.heights[static_cast<std::size_t>(m) * side + l] = cell.elevation;
      }
    }
  return w;
}

double slope_deg(const NeighborhoodWindow& window, double resolution) {
  const int n = window.half_width;
  if (n == 0) return 0.0;
  const int side = window.side();
  const double count = static_cast<double>(side) * side;

  // Points are taken relative to the centre cell; the covariance is
  // translation invariant. The x/y moments of the regular lattice are exact.
  const double ref = window.center_height();
  double sum_k2 = 0.0;
  for (int k = -n; k <= n; ++k) sum_k2 += static_cast<double>(k) * k;
  const double cxx = resolution * resolution * sum_k2 * side / count;

  double z_mean = 0.0;
  for (double h : window.heights) z_mean += h - ref;
  z_mean /= count;

  double sxz = 0.0, syz = 0.0, szz = 0.0;
  for (int m = 0; m < side; ++m)
    for (int l = 0; l < side; ++l) {
      const double dz = window.at(m, l) - ref;
      sxz += (m - n) * dz;
      syz += (l - n) * dz;
      const double c = dz - z_mean;
      szz += c * c;
    }
  Mat3 cov;
  cov << cxx, 0.0, resolution * sxz / count,
         0.0, cxx, resolution * syz / count,
         resolution * sxz / count, resolution * syz / count, szz / count;

  const Vec3 normal = smallest_eigenvector(cov);
  // atan2 form of acos(|n . e_z|); stable for near-vertical normals.
  return rad2deg(std::atan2(std::hypot(normal.x(), normal.y()), std::abs(normal.z())));
}

double roughness_m(const NeighborhoodWindow& window) {
  const int side = window.side();
  if (side == 1) return 0.0;
  const double c = window.center_height();
  double sum = 0.0;
  for (double h : window.heights) sum += std::abs(h - c);
  return sum / (static_cast<double>(side) * side - 1.0);
}

double step_height_m(const NeighborhoodWindow& window) {
  const double c = window.center_height();
  double best = 0.0;
  for (double h : window.heights) best = std::max(best, std::abs(h - c));
  return best;
}

double traversability_cost(double s, double r, double d, const TraversabilityParams& p) {
  return p.slope_weight * s / p.critical_slope_deg + p.roughness_weight * r / p.critical_roughness +
         p.step_weight * d / p.critical_step;
}

TerrainAttributes attributes_of(const NeighborhoodWindow& window, double resolution,
                                const TraversabilityParams& params) {
  TerrainAttributes a;
  if (!window.complete) return a;
  a.slope_deg = slope_deg(window, resolution);
  a.roughness = roughness_m(window);
  a.step = step_height_m(window);
  a.cost = traversability_cost(a.slope_deg, a.roughness, a.step, params);
  a.valid = true;
  return a;
}

const TerrainAttributes& AttributeLayer::at(CellIndex c) const {
  static const TerrainAttributes kInvalid{};
  if (!contains(c)) return kInvalid;
  return cells[static_cast<std::size_t>(c.i - origin.i) * size + (c.j - origin.j)];
}

AttributeLayer attribute_layer(const ElevationMap& map, const TraversabilityParams& params) {
  AttributeLayer layer;
  layer.origin = map.window_origin();
  layer.size = map.geometry().local_size;
  layer.cells.resize(static_cast<std::size_t>(layer.size) * layer.size);
  for (int wi = 0; wi < layer.size; ++wi)
    for (int wj = 0; wj < layer.size; ++wj) {
      const CellIndex c = map.window_to_global(wi, wj);
      if (!map.at(c).initialized || !map.in_window(c)) continue;
      layer.cells[static_cast<std::size_t>(wi) * layer.size + wj] =
          attributes_of(extract_window(map, c, params.half_width), map.geometry().resolution, params);
    }
  return layer;
}

void write_attribute_csv(const AttributeLayer& layer, const GridGeometry& g, AttributeField field,
                         std::ostream& out) {
  static constexpr const char* kNames[] = {"slope", "roughness", "step", "cost", "valid"};
  out << std::setprecision(10);
  out << "# origin_x=" << g.origin.x() + layer.origin.i * g.resolution
      << ",origin_y=" << g.origin.y() + layer.origin.j * g.resolution
      << ",resolution=" << g.resolution << ",rows=" << layer.size << ",cols=" << layer.size
      << ",layer=" << kNames[static_cast<int>(field)] << '\n';
  for (int wi = 0; wi < layer.size; ++wi) {
    for (int wj = 0; wj < layer.size; ++wj) {
      if (wj) out << ',';
      const TerrainAttributes& a = layer.cells[static_cast<std::size_t>(wi) * layer.size + wj];
      if (field == AttributeField::valid) {
        out << (a.valid ? 1 : 0);
        continue;
      }
      if (!a.valid) continue;
      switch (field) {
        case AttributeField::slope: out << a.slope_deg; break;
        case AttributeField::roughness: out << a.roughness; break;
        case AttributeField::step: out << a.step; break;
        default: out << a.cost; break;
      }
    }
    out << '\n';
  }
}

TraversabilityMap::TraversabilityMap(const GridGeometry& geometry, const TraversabilityParams& params)
    : geometry_(geometry),
      params_(params),
      cells_(static_cast<std::size_t>(geometry.rows) * geometry.cols),
      stamp_(cells_.size(), 0) {
  params_.validate();
}

void TraversabilityMap::refresh(const ElevationMap& map, const std::vector<CellIndex>& touched) {
  if (touched.empty()) return;
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0u);
    epoch_ = 1;
  }
  const int n = params_.half_width;
  const int side = 2 * n + 1;
  NeighborhoodWindow w;
  w.half_width = n;
  w.heights.resize(static_cast<std::size_t>(side) * side);
  for (const CellIndex& t : touched) {
    for (int di = -n; di <= n; ++di)
      for (int dj = -n; dj <= n; ++dj) {
        const CellIndex c{t.i + di, t.j + dj};
        if (!geometry_.in_bounds(c)) continue;
        const std::size_t k = static_cast<std::size_t>(c.i) * geometry_.cols + c.j;
        if (stamp_[k] == epoch_) continue;
        stamp_[k] = epoch_;
        // Arena-level completeness; the local-window rule is applied in at().
        w.center = c;
        w.complete = map.at(c).initialized;
        for (int m = 0; m < side && w.complete; ++m)
          for (int l = 0; l < side; ++l) {
            const ElevationCell& cell = map.at({c.i + m - n, c.j + l - n});
            if (!cell.initialized) {
              w.complete = false;
              break;
            }
            w.heights[static_cast<std::size_t>(m) * side + l] = cell.elevation;
          }
        cells_[k] = attributes_of(w, geometry_.resolution, params_);
      }
  }
}

bool TraversabilityMap::window_inside(const ElevationMap& map, CellIndex c) const {
  const int n = params_.half_width;
  const int h = geometry_.half_size();
  const CellIndex ctr = map.center();
  return std::abs(c.i - ctr.i) <= h - n && std::abs(c.j - ctr.j) <= h - n;
}

TerrainAttributes TraversabilityMap::at(const ElevationMap& map, CellIndex c) const {
  if (!geometry_.in_bounds(c) || !window_inside(map, c)) return {};
  return cells_[static_cast<std::size_t>(c.i) * geometry_.cols + c.j];
}

bool TraversabilityMap::traversable(const ElevationMap& map, CellIndex c) const {
  if (!geometry_.in_bounds(c) || !window_inside(map, c)) return false;
  const TerrainAttributes& a = cells_[static_cast<std::size_t>(c.i) * geometry_.cols + c.j];
  return a.valid && a.cost <= params_.max_cost;
}

}  // namespace terrex
