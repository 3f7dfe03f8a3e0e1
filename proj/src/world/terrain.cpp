#include "terrex/world/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace terrex {

namespace {

// Quartic bump (1 - u^2)^2 and its derivative w.r.t. u.
inline double bump(double u) {
  const double s = 1.0 - u * u;
  return s * s;
}
inline double bump_du(double u) { return -4.0 * u * (1.0 - u * u); }

Vec2 heading_vec(double heading_deg) {
  const double a = deg2rad(heading_deg);
  return {std::cos(a), std::sin(a)};
}

bool overlaps(const SpawnZone& zone, const Vec2& c, double r) {
  return (zone.center - c).norm() < zone.radius + r;
}

}  // namespace

GroundTruthTerrain::GroundTruthTerrain(double extent_x, double extent_y, std::uint64_t seed,
                                       std::vector<Wave> waves, std::vector<Crater> craters,
                                       std::vector<Rock> rocks, std::vector<Ridge> ridges,
                                       std::vector<Ramp> ramps)
    : extent_x_(extent_x),
      extent_y_(extent_y),
      seed_(seed),
      waves_(std::move(waves)),
      craters_(std::move(craters)),
      rocks_(std::move(rocks)),
      ridges_(std::move(ridges)),
      ramps_(std::move(ramps)) {
  bucket_rows_ = std::max(1, static_cast<int>(std::ceil(extent_x_ / bucket_size_)));
  bucket_cols_ = std::max(1, static_cast<int>(std::ceil(extent_y_ / bucket_size_)));
  buckets_.resize(static_cast<std::size_t>(bucket_rows_) * bucket_cols_);

  auto for_buckets = [&](const Vec2& c, double r, auto&& fn) {
    const int i0 = std::max(0, static_cast<int>(std::floor((c.x() - r) / bucket_size_)));
    const int i1 = std::min(bucket_rows_ - 1, static_cast<int>(std::floor((c.x() + r) / bucket_size_)));
    const int j0 = std::max(0, static_cast<int>(std::floor((c.y() - r) / bucket_size_)));
    const int j1 = std::min(bucket_cols_ - 1, static_cast<int>(std::floor((c.y() + r) / bucket_size_)));
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) fn(buckets_[static_cast<std::size_t>(i) * bucket_cols_ + j]);
  };
  for (int k = 0; k < static_cast<int>(craters_.size()); ++k)
    for_buckets(craters_[k].center, craters_[k].radius, [k](Bucket& b) { b.craters.push_back(k); });
  for (int k = 0; k < static_cast<int>(rocks_.size()); ++k)
    for_buckets(rocks_[k].center, rocks_[k].radius, [k](Bucket& b) { b.rocks.push_back(k); });

  // Bounds: undulation amplitude plus, per bucket, the sum of every feature
  // that can reach into it.
  double wave_amp = 0.0;
  for (const auto& w : waves_) wave_amp += std::abs(w.amplitude);
  double ridge_ramp_max = 0.0;
  for (const auto& r : ridges_) ridge_ramp_max += std::max(0.0, r.height);
  for (const auto& r : ramps_) ridge_ramp_max += std::max(0.0, r.rise);
  double rock_max = 0.0;
  double crater_min = 0.0;
  for (const auto& b : buckets_) {
    double up = 0.0;
    for (int k : b.rocks) up += rocks_[k].height;
    double down = 0.0;
    for (int k : b.craters) down += craters_[k].depth;
    rock_max = std::max(rock_max, up);
    crater_min = std::max(crater_min, down);
  }
  max_bound_ = wave_amp + ridge_ramp_max + rock_max + 1e-9;
  min_bound_ = -wave_amp - crater_min - 1e-9;
}

const GroundTruthTerrain::Bucket* GroundTruthTerrain::bucket_at(double x, double y) const {
  const int i = static_cast<int>(std::floor(x / bucket_size_));
  const int j = static_cast<int>(std::floor(y / bucket_size_));
  if (i < 0 || j < 0 || i >= bucket_rows_ || j >= bucket_cols_) return nullptr;
  return &buckets_[static_cast<std::size_t>(i) * bucket_cols_ + j];
}

double GroundTruthTerrain::height(double x, double y) const {
  double h = 0.0;
  for (const auto& w : waves_) h += w.amplitude * std::sin(w.k.x() * x + w.k.y() * y + w.phase);
  for (const auto& r : ridges_) {
    const Vec2 n = heading_vec(r.heading_deg + 90.0);
    const double s = std::abs(n.dot(Vec2(x, y) - r.point));
    h += std::max(0.0, r.height - s * std::tan(deg2rad(r.slope_deg)));
  }
  for (const auto& r : ramps_) {
    const double s = heading_vec(r.heading_deg).dot(Vec2(x, y) - r.origin);
    h += std::clamp(s * std::tan(deg2rad(r.slope_deg)), 0.0, r.rise);
  }
  if (const Bucket* b = bucket_at(x, y)) {
    for (int k : b->craters) {
      const Crater& c = craters_[k];
      const double u = std::hypot(x - c.center.x(), y - c.center.y()) / c.radius;
      if (u < 1.0) h -= c.depth * bump(u);
    }
    for (int k : b->rocks) {
      const Rock& r = rocks_[k];
      const double u = std::hypot(x - r.center.x(), y - r.center.y()) / r.radius;
      if (u < 1.0) h += r.height * bump(u);
    }
  }
  return h;
}

Vec2 GroundTruthTerrain::gradient(double x, double y) const {
  Vec2 g = Vec2::Zero();
  for (const auto& w : waves_) g += w.amplitude * std::cos(w.k.x() * x + w.k.y() * y + w.phase) * w.k;
  for (const auto& r : ridges_) {
    const Vec2 n = heading_vec(r.heading_deg + 90.0);
    const double s = n.dot(Vec2(x, y) - r.point);
    const double t = std::tan(deg2rad(r.slope_deg));
    if (std::abs(s) * t < r.height && s != 0.0) g -= t * (s > 0.0 ? 1.0 : -1.0) * n;
  }
  for (const auto& r : ramps_) {
    const Vec2 d = heading_vec(r.heading_deg);
    const double t = std::tan(deg2rad(r.slope_deg));
    const double v = d.dot(Vec2(x, y) - r.origin) * t;
    if (v > 0.0 && v < r.rise) g += t * d;
  }
  if (const Bucket* b = bucket_at(x, y)) {
    auto radial = [&](const Vec2& c, double radius, double amp) {
      const Vec2 off(x - c.x(), y - c.y());
      const double rho = off.norm();
      const double u = rho / radius;
      if (u < 1.0 && rho > 0.0) g += amp * bump_du(u) / radius * (off / rho);
    };
    for (int k : b->craters) radial(craters_[k].center, craters_[k].radius, -craters_[k].depth);
    for (int k : b->rocks) radial(rocks_[k].center, rocks_[k].radius, rocks_[k].height);
  }
  return g;
}

double GroundTruthTerrain::slope_deg(double x, double y) const {
  return rad2deg(std::atan(gradient(x, y).norm()));
}

Vec3 GroundTruthTerrain::normal(double x, double y) const {
  const Vec2 g = gradient(x, y);
  return Vec3(-g.x(), -g.y(), 1.0).normalized();
}

GroundTruthTerrain generate_terrain(const TerrainConfig& config, std::uint64_t seed) {
  if (!(config.extent_x > 0.0) || !(config.extent_y > 0.0))
    throw ConfigError("terrain extents must be positive");
  const double half_min = 0.5 * std::min(config.extent_x, config.extent_y);
  for (const auto& z : config.spawn_zones)
    if (!(z.radius > 0.0)) throw ConfigError("spawn zone radius must be positive");

  auto check_zone = [&](const Vec2& c, double r, const char* what) {
    for (const auto& z : config.spawn_zones)
      if (overlaps(z, c, r))
        throw ConfigError(std::string(what) + " overlaps a spawn-clear zone");
  };
  for (const auto& c : config.craters) {
    if (!(c.radius > 0.0) || c.radius >= half_min)
      throw ConfigError("crater radius must be in (0, min(extent)/2)");
    if (c.depth < 0.0) throw ConfigError("crater depth must be non-negative");
    check_zone(c.center, c.radius, "crater");
  }
  for (const auto& r : config.rocks) {
    if (!(r.radius > 0.0)) throw ConfigError("rock radius must be positive");
    check_zone(r.center, r.radius, "rock");
  }
  for (const auto& r : config.ridges)
    if (r.slope_deg <= 0.0 || r.slope_deg >= 90.0) throw ConfigError("ridge slope must be in (0, 90)");
  for (const auto& r : config.ramps)
    if (r.slope_deg <= 0.0 || r.slope_deg >= 90.0) throw ConfigError("ramp slope must be in (0, 90)");
  auto check_field = [&](const FeatureField& f, const char* what) {
    if (f.count < 0) throw ConfigError(std::string(what) + " count must be non-negative");
    if (f.count == 0) return;
    if (!(f.min_radius > 0.0) || f.max_radius < f.min_radius || f.max_height < f.min_height)
      throw ConfigError(std::string(what) + " ranges are invalid");
  };
  check_field(config.crater_field, "crater_field");
  check_field(config.rock_field, "rock_field");
  if (config.crater_field.count > 0 && config.crater_field.max_radius >= half_min)
    throw ConfigError("crater_field radius must be below min(extent)/2");
  if (config.base.components < 0 || (config.base.amplitude != 0.0 && !(config.base.wavelength > 0.0)))
    throw ConfigError("base undulation is invalid");

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<GroundTruthTerrain::Wave> waves;
  if (config.base.amplitude != 0.0 && config.base.components > 0) {
    const double a = config.base.amplitude / config.base.components;
    for (int k = 0; k < config.base.components; ++k) {
      const double lambda = config.base.wavelength * (1.0 + unit(rng));
      const double dir = 2.0 * kPi * unit(rng);
      const double phase = 2.0 * kPi * unit(rng);
      const double kn = 2.0 * kPi / lambda;
      waves.push_back({Vec2(kn * std::cos(dir), kn * std::sin(dir)), a, phase});
    }
  }

  // Rejection-place procedural features clear of spawn zones; give up on a
  // feature after a bounded number of tries so dense configs still terminate.
  auto place = [&](const FeatureField& f, auto&& emit) {
    for (int n = 0; n < f.count; ++n) {
      const double radius = f.min_radius + (f.max_radius - f.min_radius) * unit(rng);
      const double hval = f.min_height + (f.max_height - f.min_height) * unit(rng);
      for (int attempt = 0; attempt < 100; ++attempt) {
        const Vec2 c(config.extent_x * unit(rng), config.extent_y * unit(rng));
        bool clear = true;
        for (const auto& z : config.spawn_zones) clear = clear && !overlaps(z, c, radius);
        if (clear) {
          emit(c, radius, hval);
          break;
        }
      }
    }
  };
  std::vector<Crater> craters = config.craters;
  std::vector<Rock> rocks = config.rocks;
  place(config.crater_field, [&](const Vec2& c, double r, double ratio) {
    craters.push_back({c, r, ratio * r});
  });
  place(config.rock_field, [&](const Vec2& c, double r, double h) { rocks.push_back({c, r, h}); });

  return GroundTruthTerrain(config.extent_x, config.extent_y, seed, std::move(waves),
                            std::move(craters), std::move(rocks), config.ridges, config.ramps);
}

void export_heightfield_csv(const GroundTruthTerrain& terrain, double resolution,
                            std::ostream& out) {
  if (!(resolution > 0.0)) throw ConfigError("export resolution must be positive");
  const int rows = static_cast<int>(std::floor(terrain.extent_x() / resolution));
  const int cols = static_cast<int>(std::floor(terrain.extent_y() / resolution));
  out << "# extent_x=" << terrain.extent_x() << ",extent_y=" << terrain.extent_y()
      << ",resolution=" << resolution << ",rows=" << rows << ",cols=" << cols << '\n';
  out << std::setprecision(6) << std::fixed;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j) out << ',';
      out << terrain.height((i + 0.5) * resolution, (j + 0.5) * resolution);
    }
    out << '\n';
  }
}

}  // namespace terrex
