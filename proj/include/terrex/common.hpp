#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace terrex {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Single deterministic random stream. Every consumer draws from a stream
/// passed in by the caller so that draw order is fixed by the call sequence.
using Rng = std::mt19937_64;

/// Integer grid cell address (row index i along x, column index j along y).
struct CellIndex {
  int i = 0;
  int j = 0;

  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Raised for invalid user-supplied configuration (terrain, experiment,
/// planner parameters, spawn poses).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an internal invariant is broken; the current run is aborted.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace terrex
