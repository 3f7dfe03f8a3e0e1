#include "terrex/mapping/elevation_map.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace terrex {

namespace {
const ElevationCell kEmptyCell{};
}

ElevationMap::ElevationMap(const GridGeometry& geometry)
    : geometry_(geometry),
      cells_(static_cast<std::size_t>(geometry.rows) * geometry.cols),
      touched_epoch_(cells_.size(), 0) {
  if (geometry.rows <= 0 || geometry.cols <= 0) throw ConfigError("elevation map needs a non-empty arena");
  if (geometry.local_size < 1 || geometry.local_size % 2 == 0)
    throw ConfigError("local map size must be odd");
}

void ElevationMap::recenter(const Vec2& center) { center_ = geometry_.index_of(center.x(), center.y()); }

bool ElevationMap::in_window(CellIndex c) const {
  const int h = geometry_.half_size();
  return geometry_.in_bounds(c) && std::abs(c.i - center_.i) <= h && std::abs(c.j - center_.j) <= h;
}

const ElevationCell& ElevationMap::at(CellIndex c) const {
  if (!geometry_.in_bounds(c)) return kEmptyCell;
  return cells_[offset(c)];
}

void ElevationMap::touch(CellIndex c) {
  const std::size_t k = offset(c);
  if (touched_epoch_[k] != epoch_) {
    touched_epoch_[k] = epoch_;
    touched_.push_back(c);
  }
}

void ElevationMap::ingest(std::span<const HeightObservation> observations) {
  for (const auto& obs : observations) {
    if (!in_window(obs.cell)) {
      ++dropped_;
      continue;
    }
    ElevationCell& cell = cells_[offset(obs.cell)];
    cell = update(cell, obs);
    touch(obs.cell);
  }
}

void ElevationMap::initialize_patch(const Vec2& center, double half_extent, double height,
                                    double variance) {
  const CellIndex lo = geometry_.index_of(center.x() - half_extent, center.y() - half_extent);
  const CellIndex hi = geometry_.index_of(center.x() + half_extent, center.y() + half_extent);
  for (int i = lo.i; i <= hi.i; ++i)
    for (int j = lo.j; j <= hi.j; ++j) {
      const CellIndex c{i, j};
      if (!geometry_.in_bounds(c) || cells_[offset(c)].initialized) continue;
      cells_[offset(c)] = update(ElevationCell{}, HeightObservation{c, height, variance});
      touch(c);
    }
}

std::vector<CellIndex> ElevationMap::take_touched() {
  std::vector<CellIndex> out;
  out.swap(touched_);
  if (++epoch_ == 0) {
    std::fill(touched_epoch_.begin(), touched_epoch_.end(), 0u);
    epoch_ = 1;
  }
  return out;
}

GlobalConfidenceMap::GlobalConfidenceMap(const GridGeometry& geometry)
    : geometry_(geometry), values_(static_cast<std::size_t>(geometry.rows) * geometry.cols, -1.0) {}

std::optional<double> GlobalConfidenceMap::get(CellIndex c) const {
  if (!geometry_.in_bounds(c)) return std::nullopt;
  const double v = values_[static_cast<std::size_t>(c.i) * geometry_.cols + c.j];
  if (v < 0.0) return std::nullopt;
  return v;
}

void GlobalConfidenceMap::merge(CellIndex c, double confidence) {
  if (!geometry_.in_bounds(c)) return;
  double& v = values_[static_cast<std::size_t>(c.i) * geometry_.cols + c.j];
  if (v < 0.0) {
    ++observed_;
    v = confidence;
  } else if (confidence > v) {
    v = confidence;
  }
}

void fold_into_global(GlobalConfidenceMap& global, const ElevationMap& local) {
  const int n = local.geometry().local_size;
  for (int wi = 0; wi < n; ++wi)
    for (int wj = 0; wj < n; ++wj) {
      const CellIndex c = local.window_to_global(wi, wj);
      const ElevationCell& cell = local.at(c);
      if (cell.initialized) global.merge(c, cell.confidence);
    }
}

void write_snapshot_csv(const ElevationMap& map, MapLayer layer, std::ostream& out) {
  const GridGeometry& g = map.geometry();
  const CellIndex o = map.window_origin();
  const char* name = layer == MapLayer::elevation ? "elevation"
                     : layer == MapLayer::variance ? "variance"
                                                   : "confidence";
  out << std::setprecision(10);
  out << "# origin_x=" << g.origin.x() + o.i * g.resolution
      << ",origin_y=" << g.origin.y() + o.j * g.resolution << ",resolution=" << g.resolution
      << ",rows=" << g.local_size << ",cols=" << g.local_size << ",layer=" << name << '\n';
  for (int wi = 0; wi < g.local_size; ++wi) {
    for (int wj = 0; wj < g.local_size; ++wj) {
      if (wj) out << ',';
      const ElevationCell& c = map.window_cell(wi, wj);
      if (!c.initialized) continue;
      out << (layer == MapLayer::elevation ? c.elevation
              : layer == MapLayer::variance ? c.variance
                                            : c.confidence);
    }
    out << '\n';
  }
}

void write_global_confidence_csv(const GlobalConfidenceMap& global, std::ostream& out) {
  const GridGeometry& g = global.geometry();
  out << "# origin_x=" << g.origin.x() << ",origin_y=" << g.origin.y()
      << ",resolution=" << std::setprecision(10) << g.resolution << ",rows=" << g.rows
      << ",cols=" << g.cols << '\n';
  out << std::setprecision(17);
  global.for_each([&](CellIndex c, double v) { out << c.i << ',' << c.j << ',' << v << '\n'; });
}

GlobalConfidenceMap read_global_confidence_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# ", 0) != 0)
    throw ConfigError("global confidence CSV lacks a header line");
  GridGeometry g;
  g.local_size = 1;
  std::stringstream fields(header.substr(2));
  std::string kv;
  while (std::getline(fields, kv, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq);
    const double value = std::stod(kv.substr(eq + 1));
    if (key == "origin_x") g.origin.x() = value;
    else if (key == "origin_y") g.origin.y() = value;
    else if (key == "resolution") g.resolution = value;
    else if (key == "rows") g.rows = static_cast<int>(value);
    else if (key == "cols") g.cols = static_cast<int>(value);
  }
  if (g.rows <= 0 || g.cols <= 0 || !(g.resolution > 0.0))
    throw ConfigError("global confidence CSV header is incomplete");
  GlobalConfidenceMap global(g);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
      throw ConfigError("malformed global confidence row: " + line);
    global.merge({std::stoi(a), std::stoi(b)}, std::stod(c));
  }
  return global;
}

}  // namespace terrex
