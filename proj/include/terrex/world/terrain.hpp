#pragma once

#include "terrex/common.hpp"

#include <iosfwd>
#include <vector>

namespace terrex {

/// Bowl-shaped depression: h(rho) = -depth * (1 - (rho/radius)^2)^2 inside
/// the radius, zero outside. Smooth at the rim.
struct Crater {
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
  double depth = 0.0;
};

/// Mound with the same quartic profile as a crater, positive height.
struct Rock {
  Vec2 center = Vec2::Zero();
  double radius = 0.5;
  double height = 0.0;
};

/// Infinite straight ridge with a triangular cross-section: its crest passes
/// through `point` along `heading_deg`, flanks descend at `slope_deg`.
struct Ridge {
  Vec2 point = Vec2::Zero();
  double heading_deg = 0.0;
  double slope_deg = 0.0;
  double height = 0.0;
};

/// Incline that rises along `heading_deg` starting at the line through
/// `origin` (perpendicular to the heading) and levels off at `rise`.
struct Ramp {
  Vec2 origin = Vec2::Zero();
  double heading_deg = 0.0;
  double slope_deg = 0.0;
  double rise = 0.0;
};

/// Disc kept free of discrete features so that robots can be spawned there.
struct SpawnZone {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

/// Low-frequency sinusoidal undulation added everywhere.
struct BaseUndulation {
  double amplitude = 0.0;   ///< sum of component amplitudes [m]
  double wavelength = 8.0;  ///< shortest component wavelength [m]
  int components = 4;
};

/// Procedural scatter of craters or rocks. For craters `min_height`/
/// `max_height` are depth-to-radius ratios, for rocks they are heights [m].
struct FeatureField {
  int count = 0;
  double min_radius = 0.0;
  double max_radius = 0.0;
  double min_height = 0.0;
  double max_height = 0.0;
};

struct TerrainConfig {
  double extent_x = 0.0;
  double extent_y = 0.0;
  double resolution = 0.1;  ///< export grid spacing only
  std::uint64_t seed = 0;
  BaseUndulation base;
  std::vector<Crater> craters;
  std::vector<Rock> rocks;
  std::vector<Ridge> ridges;
  std::vector<Ramp> ramps;
  FeatureField crater_field;
  FeatureField rock_field;
  std::vector<SpawnZone> spawn_zones;
};

/// Continuous analytic heightfield over [0, extent_x] x [0, extent_y].
///
/// Immutable after construction; all queries are const and thread-safe.
class GroundTruthTerrain {
 public:
  struct Wave {
    Vec2 k;  ///< wave vector [rad/m]
    double amplitude;
    double phase;
  };

  GroundTruthTerrain(double extent_x, double extent_y, std::uint64_t seed,
                     std::vector<Wave> waves, std::vector<Crater> craters,
                     std::vector<Rock> rocks, std::vector<Ridge> ridges,
                     std::vector<Ramp> ramps);

  double height(double x, double y) const;
  /// Analytic gradient (dh/dx, dh/dy).
  Vec2 gradient(double x, double y) const;
  /// Inclination of the tangent plane against horizontal, degrees.
  double slope_deg(double x, double y) const;
  /// Unit upward surface normal.
  Vec3 normal(double x, double y) const;

  bool contains(double x, double y) const {
    return x >= 0.0 && y >= 0.0 && x <= extent_x_ && y <= extent_y_;
  }

  double extent_x() const { return extent_x_; }
  double extent_y() const { return extent_y_; }
  std::uint64_t seed() const { return seed_; }
  /// Conservative bounds on height over the whole plane.
  double max_height_bound() const { return max_bound_; }
  double min_height_bound() const { return min_bound_; }

  const std::vector<Crater>& craters() const { return craters_; }
  const std::vector<Rock>& rocks() const { return rocks_; }
  const std::vector<Ridge>& ridges() const { return ridges_; }
  const std::vector<Ramp>& ramps() const { return ramps_; }

 private:
  struct Bucket {
    std::vector<int> craters;
    std::vector<int> rocks;
  };
  const Bucket* bucket_at(double x, double y) const;

  double extent_x_;
  double extent_y_;
  std::uint64_t seed_;
  std::vector<Wave> waves_;
  std::vector<Crater> craters_;
  std::vector<Rock> rocks_;
  std::vector<Ridge> ridges_;
  std::vector<Ramp> ramps_;

  double bucket_size_ = 2.0;
  int bucket_rows_ = 0;
  int bucket_cols_ = 0;
  std::vector<Bucket> buckets_;
  double max_bound_ = 0.0;
  double min_bound_ = 0.0;
};

/// Validates the config and expands procedural fields with `seed`.
/// Throws ConfigError on non-positive extents, oversized craters, or explicit
/// features intruding into a spawn zone.
GroundTruthTerrain generate_terrain(const TerrainConfig& config, std::uint64_t seed);

/// Dense height grid sampled at cell centres, one row per x index.
void export_heightfield_csv(const GroundTruthTerrain& terrain, double resolution,
                            std::ostream& out);

}  // namespace terrex
