#pragma once

#include "terrex/planner/exploration_grid.hpp"

#include <span>

namespace terrex {

/// Range-limited sensor used to score viewpoints.
struct GainSensor {
  double range = 30.0;
  double min_elevation_deg = -15.0;
  double max_elevation_deg = 15.0;

  void validate() const;
};

/// True when voxel `v` is within range and vertical field of view of
/// `viewpoint` and no occupied voxel lies between them.
bool voxel_visible(const ExplorationGrid& grid, const Vec3& viewpoint, const Voxel& v,
                   const GainSensor& sensor);

/// Volume of unknown voxels visible from `viewpoint`.
double volumetric_gain(const ExplorationGrid& grid, const Vec3& viewpoint,
                       const GainSensor& sensor);

/// max over vertices of 1 (confidence >= threshold) or
/// exp(beta * (threshold - confidence)).
double confidence_gain(std::span<const double> confidences, double threshold, double beta);

inline double combined_gain(double volumetric, double confidence) { return volumetric * confidence; }

}  // namespace terrex
