#include "terrex/planner/exploration_grid.hpp"

namespace terrex {

ExplorationGrid::ExplorationGrid(const Vec3& min_corner, const Vec3& max_corner, double voxel_size)
    : min_(min_corner), size_(voxel_size) {
  if (!(voxel_size > 0.0)) throw ConfigError("voxel size must be positive");
  const Vec3 extent = max_corner - min_corner;
  if (!(extent.minCoeff() > 0.0)) throw ConfigError("exploration grid bounds are empty");
  for (int k = 0; k < 3; ++k) dims_(k) = static_cast<int>(std::ceil(extent(k) / size_ - 1e-9));
  cells_.assign(static_cast<std::size_t>(dims_.x()) * dims_.y() * dims_.z(),
                static_cast<std::uint8_t>(VoxelState::unknown));
}

ExplorationGrid ExplorationGrid::for_terrain(const GroundTruthTerrain& terrain, double voxel_size,
                                             double headroom) {
  return ExplorationGrid(Vec3(0.0, 0.0, terrain.min_height_bound() - voxel_size),
                         Vec3(terrain.extent_x(), terrain.extent_y(),
                              terrain.max_height_bound() + headroom),
                         voxel_size);
}

void ExplorationGrid::set(const Voxel& v, VoxelState s) {
  if (!contains(v)) return;
  std::uint8_t& c = cells_[offset(v)];
  const bool was_known = c != static_cast<std::uint8_t>(VoxelState::unknown);
  const bool now_known = s != VoxelState::unknown;
  if (was_known && !now_known) --known_;
  if (!was_known && now_known) ++known_;
  c = static_cast<std::uint8_t>(s);
}

void ExplorationGrid::integrate_hit(const Vec3& origin, const Vec3& end) {
  const Voxel last = voxel_of(end);
  traverse(origin, end, [&](const Voxel& v) {
    if (!contains(v)) return true;
    if (v == last) {
      set(v, VoxelState::occupied);
    } else if (state(v) == VoxelState::unknown) {
      set(v, VoxelState::free);
    }
    return true;
  });
}

void ExplorationGrid::integrate_miss(const Vec3& origin, const Vec3& end) {
  traverse(origin, end, [&](const Voxel& v) {
    if (contains(v) && state(v) == VoxelState::unknown) set(v, VoxelState::free);
    return true;
  });
}

void ExplorationGrid::integrate_scan(const Scan& scan, const SensorPose& pose, double max_range) {
  for (const RangeMeasurement& m : scan.points) integrate_hit(pose.position, to_map_frame(m, pose));
  for (const Vec3& d : scan.misses)
    integrate_miss(pose.position, pose.position + max_range * (pose.orientation * d));
}

}  // namespace terrex
