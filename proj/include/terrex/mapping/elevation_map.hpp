#pragma once

#include "terrex/mapping/grid.hpp"
#include "terrex/mapping/kalman.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace terrex {

/// Robot-centric elevation map.
///
/// The N x N local window slides over an arena-wide cell store, so cells that
/// leave the window keep their filtered state and are restored when the
/// window returns. Only cells inside the current window accept updates.
class ElevationMap {
 public:
  explicit ElevationMap(const GridGeometry& geometry);

  const GridGeometry& geometry() const { return geometry_; }

  /// Moves the window so that the cell containing `center` is its middle.
  void recenter(const Vec2& center);
  CellIndex center() const { return center_; }
  /// Global index of window cell (0, 0).
  CellIndex window_origin() const {
    return {center_.i - geometry_.half_size(), center_.j - geometry_.half_size()};
  }
  CellIndex window_to_global(int wi, int wj) const {
    const CellIndex o = window_origin();
    return {o.i + wi, o.j + wj};
  }
  bool in_window(CellIndex c) const;

  /// Cell state by global index; cells outside the arena read as
  /// uninitialized.
  const ElevationCell& at(CellIndex c) const;
  const ElevationCell& window_cell(int wi, int wj) const { return at(window_to_global(wi, wj)); }

  /// Applies observations in arrival order. Observations outside the window
  /// are skipped and counted.
  void ingest(std::span<const HeightObservation> observations);
  std::size_t dropped() const { return dropped_; }

  /// Seeds uninitialized cells within `half_extent` of `center` with a flat
  /// patch at `height` (used for the area under the robot at start-up, which
  /// the sensor cannot see).
  void initialize_patch(const Vec2& center, double half_extent, double height, double variance);

  /// Global indices of cells changed since the previous call, each listed once.
  std::vector<CellIndex> take_touched();

 private:
  std::size_t offset(CellIndex c) const {
    return static_cast<std::size_t>(c.i) * geometry_.cols + c.j;
  }
  void touch(CellIndex c);

  GridGeometry geometry_;
  CellIndex center_{0, 0};
  std::vector<ElevationCell> cells_;
  std::vector<std::uint32_t> touched_epoch_;
  std::uint32_t epoch_ = 1;
  std::vector<CellIndex> touched_;
  std::size_t dropped_ = 0;
};

/// Best confidence ever seen per arena cell, accumulated over a run.
class GlobalConfidenceMap {
 public:
  GlobalConfidenceMap() = default;
  explicit GlobalConfidenceMap(const GridGeometry& geometry);

  const GridGeometry& geometry() const { return geometry_; }
  std::optional<double> get(CellIndex c) const;
  /// Stores max(existing, confidence).
  void merge(CellIndex c, double confidence);
  /// Number of cells with a stored value.
  std::size_t size() const { return observed_; }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (int i = 0; i < geometry_.rows; ++i)
      for (int j = 0; j < geometry_.cols; ++j) {
        const double v = values_[static_cast<std::size_t>(i) * geometry_.cols + j];
        if (v >= 0.0) fn(CellIndex{i, j}, v);
      }
  }

 private:
  GridGeometry geometry_;
  std::vector<double> values_;  // negative = never observed
  std::size_t observed_ = 0;
};

/// Folds every initialized window cell into the global map (max semantics).
void fold_into_global(GlobalConfidenceMap& global, const ElevationMap& local);

enum class MapLayer { elevation, variance, confidence };

/// Local window as CSV: one header line
///   # origin_x=..,origin_y=..,resolution=..,rows=..,cols=..,layer=..
/// then one line per window row; never-observed cells are empty fields.
void write_snapshot_csv(const ElevationMap& map, MapLayer layer, std::ostream& out);

/// Sparse global-map export, lines "i,j,confidence" after a header comment.
void write_global_confidence_csv(const GlobalConfidenceMap& global, std::ostream& out);
GlobalConfidenceMap read_global_confidence_csv(std::istream& in);

}  // namespace terrex
