#include "terrex/mission/robot.hpp"

#include <algorithm>
#include <cmath>

namespace terrex {

RobotState step_execute(const RobotState& state, const PathSegment& segment, double dt,
                        const GroundTruthTerrain& terrain) {
  RobotState out = state;
  const Vec2 d = segment.to - segment.from;
  if (d.norm() > 0.0) out.heading = std::atan2(d.y(), d.x());
  const Vec2 here = state.position.head<2>();
  const Vec2 to_go = segment.to - here;
  const double remaining = to_go.norm();
  const double travel = std::min(remaining, state.speed * dt);
  const Vec2 next = remaining > 0.0 ? Vec2(here + to_go * (travel / remaining)) : here;
  out.position = Vec3(next.x(), next.y(), terrain.height(next.x(), next.y()));
  return out;
}

double footprint_height_span(const Vec2& p, double radius, const GroundTruthTerrain& terrain) {
  constexpr int kDirections = 16;
  double lo = terrain.height(p.x(), p.y());
  double hi = lo;
  for (double r : {0.5 * radius, radius})
    for (int k = 0; k < kDirections; ++k) {
      const double a = 2.0 * kPi * k / kDirections;
      const double h = terrain.height(p.x() + r * std::cos(a), p.y() + r * std::sin(a));
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
  return hi - lo;
}

Hazard hazard_check(const RobotState& state, const GroundTruthTerrain& terrain,
                    const HazardLimits& limits) {
  const Vec2 p = state.position.head<2>();
  if (terrain.slope_deg(p.x(), p.y()) > limits.max_slope_deg) return Hazard::tipped_over;
  if (footprint_height_span(p, state.radius, terrain) > limits.max_step) return Hazard::tipped_over;
  return Hazard::safe;
}

std::string_view to_string(Hazard h) { return h == Hazard::safe ? "safe" : "tipped_over"; }

}  // namespace terrex
