#pragma once

#include "terrex/mapping/elevation_map.hpp"

#include <iosfwd>
#include <vector>

namespace terrex {

struct TraversabilityParams {
  double slope_weight = 1.0 / 3.0;
  double roughness_weight = 1.0 / 3.0;
  double step_weight = 1.0 / 3.0;
  double critical_slope_deg = 20.0;
  double critical_roughness = 0.15;
  double critical_step = 0.2;
  double max_cost = 0.4;  ///< acceptance threshold for sampling
  int half_width = 2;     ///< neighbourhood is (2n+1) x (2n+1) cells

  /// Weights in [0,1] summing to 1, positive thresholds, n >= 0.
  void validate() const;
};

/// (2n+1) x (2n+1) block of filtered elevations around a centre cell,
/// row-major with the first index along x.
struct NeighborhoodWindow {
  CellIndex center;
  int half_width = 0;
  std::vector<double> heights;
  bool complete = false;

  int side() const { return 2 * half_width + 1; }
  double at(int m, int l) const { return heights[static_cast<std::size_t>(m) * side() + l]; }
  double center_height() const { return at(half_width, half_width); }
};

struct TerrainAttributes {
  double slope_deg = 0.0;
  double roughness = 0.0;
  double step = 0.0;
  double cost = 0.0;
  bool valid = false;
};

/// Window around `center`; incomplete when any member cell is uninitialized
/// or outside the map's local window.
NeighborhoodWindow extract_window(const ElevationMap& map, CellIndex center, int half_width);

/// Angle between the PCA normal of the window points and the vertical.
double slope_deg(const NeighborhoodWindow& window, double resolution);
/// Mean absolute deviation from the centre over the (2n+1)^2 - 1 neighbours.
double roughness_m(const NeighborhoodWindow& window);
/// Largest absolute deviation from the centre.
double step_height_m(const NeighborhoodWindow& window);

double traversability_cost(double slope_deg, double roughness, double step,
                           const TraversabilityParams& params);

/// All attributes of one cell from an already-extracted window.
TerrainAttributes attributes_of(const NeighborhoodWindow& window, double resolution,
                                const TraversabilityParams& params);

/// Attributes for every cell of the local window (invalid where the
/// neighbourhood is incomplete).
struct AttributeLayer {
  CellIndex origin;  ///< global index of window cell (0,0)
  int size = 0;
  std::vector<TerrainAttributes> cells;

  bool contains(CellIndex c) const {
    return c.i >= origin.i && c.j >= origin.j && c.i < origin.i + size && c.j < origin.j + size;
  }
  const TerrainAttributes& at(CellIndex c) const;
};

AttributeLayer attribute_layer(const ElevationMap& map, const TraversabilityParams& params);

enum class AttributeField { slope, roughness, step, cost, valid };

/// One attribute of the layer as CSV, with the same header line as the
/// elevation snapshots (`layer=` names the field). Invalid cells are empty
/// except in the `valid` layer, which writes 0/1 everywhere.
void write_attribute_csv(const AttributeLayer& layer, const GridGeometry& geometry,
                         AttributeField field, std::ostream& out);

/// Arena-wide attribute cache refreshed from the cells an ElevationMap
/// reports as touched. Lookups apply the local-window rule, so `at` agrees
/// with attribute_layer() for the map's current window.
class TraversabilityMap {
 public:
  TraversabilityMap(const GridGeometry& geometry, const TraversabilityParams& params);

  const TraversabilityParams& params() const { return params_; }

  /// Recomputes every cell whose neighbourhood contains a touched cell.
  void refresh(const ElevationMap& map, const std::vector<CellIndex>& touched);
  /// Attributes as seen through `map`'s current local window.
  TerrainAttributes at(const ElevationMap& map, CellIndex c) const;
  /// Valid and cost <= max_cost within `map`'s window.
  bool traversable(const ElevationMap& map, CellIndex c) const;

 private:
  bool window_inside(const ElevationMap& map, CellIndex c) const;

  GridGeometry geometry_;
  TraversabilityParams params_;
  std::vector<TerrainAttributes> cells_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

}  // namespace terrex
