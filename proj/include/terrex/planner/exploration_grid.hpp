#pragma once

#include "terrex/world/sensor.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <vector>

namespace terrex {

using Voxel = Eigen::Vector3i;

enum class VoxelState : std::uint8_t { unknown = 0, free = 1, occupied = 2 };

/// Axis-aligned 3D occupancy grid used for volumetric exploration gain.
///
/// Voxels only ever move from unknown to known; an occupied voxel stays
/// occupied, so the known volume is non-decreasing.
class ExplorationGrid {
 public:
  ExplorationGrid(const Vec3& min_corner, const Vec3& max_corner, double voxel_size);

  /// Arena footprint, from below the lowest terrain point to `headroom`
  /// above the highest one.
  static ExplorationGrid for_terrain(const GroundTruthTerrain& terrain, double voxel_size,
                                     double headroom);

  double voxel_size() const { return size_; }
  double voxel_volume() const { return size_ * size_ * size_; }
  const Vec3& min_corner() const { return min_; }
  const Voxel& dims() const { return dims_; }

  bool contains(const Voxel& v) const {
    return v.x() >= 0 && v.y() >= 0 && v.z() >= 0 && v.x() < dims_.x() && v.y() < dims_.y() &&
           v.z() < dims_.z();
  }
  /// Voxel containing `p` (may lie outside the grid).
  Voxel voxel_of(const Vec3& p) const {
    return {static_cast<int>(std::floor((p.x() - min_.x()) / size_)),
            static_cast<int>(std::floor((p.y() - min_.y()) / size_)),
            static_cast<int>(std::floor((p.z() - min_.z()) / size_))};
  }
  Vec3 center_of(const Voxel& v) const {
    return min_ + (v.cast<double>() + Vec3::Constant(0.5)) * size_;
  }

  /// Out-of-grid voxels read as unknown.
  VoxelState state(const Voxel& v) const {
    return contains(v) ? static_cast<VoxelState>(cells_[offset(v)]) : VoxelState::unknown;
  }
  void set(const Voxel& v, VoxelState s);

  /// Marks voxels between `origin` and `end` free and the voxel of `end`
  /// occupied.
  void integrate_hit(const Vec3& origin, const Vec3& end);
  /// Marks every voxel along the segment free.
  void integrate_miss(const Vec3& origin, const Vec3& end);
  void integrate_scan(const Scan& scan, const SensorPose& pose, double max_range);

  std::size_t known_count() const { return known_; }
  double explored_volume() const { return static_cast<double>(known_) * voxel_volume(); }

  /// Visits the voxels pierced by segment [a, b] in order, starting with the
  /// voxel of `a`. Voxels outside the grid are visited too; `fn(voxel)`
  /// returns false to stop early.
  template <typename Fn>
  void traverse(const Vec3& a, const Vec3& b, Fn&& fn) const;

 private:
  std::size_t offset(const Voxel& v) const {
    return (static_cast<std::size_t>(v.z()) * dims_.y() + v.y()) * dims_.x() + v.x();
  }

  Vec3 min_;
  double size_;
  Voxel dims_;
  std::vector<std::uint8_t> cells_;
  std::size_t known_ = 0;
};

template <typename Fn>
void ExplorationGrid::traverse(const Vec3& a, const Vec3& b, Fn&& fn) const {
  Voxel v = voxel_of(a);
  const Voxel last = voxel_of(b);
  const Vec3 d = b - a;
  Voxel step;
  Vec3 t_max, t_delta;
  for (int k = 0; k < 3; ++k) {
    if (d(k) > 0.0) {
      step(k) = 1;
      const double boundary = min_(k) + (v(k) + 1) * size_;
      t_max(k) = (boundary - a(k)) / d(k);
      t_delta(k) = size_ / d(k);
    } else if (d(k) < 0.0) {
      step(k) = -1;
      const double boundary = min_(k) + v(k) * size_;
      t_max(k) = (boundary - a(k)) / d(k);
      t_delta(k) = -size_ / d(k);
    } else {
      step(k) = 0;
      t_max(k) = INFINITY;
      t_delta(k) = INFINITY;
    }
  }
  const int max_steps = (last - v).cwiseAbs().sum();
  for (int n = 0;; ++n) {
    if (!fn(static_cast<const Voxel&>(v))) return;
    if (v == last || n >= max_steps) return;
    int axis = 0;
    if (t_max(1) < t_max(axis)) axis = 1;
    if (t_max(2) < t_max(axis)) axis = 2;
    if (t_max(axis) > 1.0) return;
    v(axis) += step(axis);
    t_max(axis) += t_delta(axis);
  }
}

}  // namespace terrex
