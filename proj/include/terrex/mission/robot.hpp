#pragma once

#include "terrex/world/terrain.hpp"

#include <string_view>

namespace terrex {

struct RobotState {
  Vec3 position = Vec3::Zero();  ///< z follows the ground
  double heading = 0.0;
  double speed = 0.8;
  double radius = 0.3;
};

struct PathSegment {
  Vec2 from = Vec2::Zero();
  Vec2 to = Vec2::Zero();
};

/// Turns in place toward the segment direction, then drives toward its end
/// for `dt` seconds at the robot's speed without overshooting.
RobotState step_execute(const RobotState& state, const PathSegment& segment, double dt,
                        const GroundTruthTerrain& terrain);

struct HazardLimits {
  double max_slope_deg = 30.0;
  double max_step = 0.35;  ///< max - min ground height under the footprint
};

enum class Hazard { safe, tipped_over };

/// Largest ground-truth height difference across the robot disc, sampled at
/// the centre and on two rings.
double footprint_height_span(const Vec2& p, double radius, const GroundTruthTerrain& terrain);

Hazard hazard_check(const RobotState& state, const GroundTruthTerrain& terrain,
                    const HazardLimits& limits = {});

std::string_view to_string(Hazard h);

}  // namespace terrex
