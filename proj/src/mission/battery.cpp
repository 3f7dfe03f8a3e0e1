#include "terrex/mission/battery.hpp"

#include "terrex/common.hpp"

namespace terrex {

void BatteryModel::validate() const {
  if (!(capacity_ah > 0.0)) throw ConfigError("battery capacity must be positive");
  if (!(initial_capacity_ah > 0.0) || initial_capacity_ah > capacity_ah)
    throw ConfigError("initial battery capacity must lie in (0, C]");
  if (!(current_a >= 0.0)) throw ConfigError("discharge current must be non-negative");
}

double soc_at(double t, const BatteryModel& b) {
  if (t < 0.0) throw ConfigError("time must be non-negative");
  return 100.0 * b.initial_capacity_ah / b.capacity_ah -
         100.0 * b.current_a * t / (3600.0 * b.capacity_ah);
}

}  // namespace terrex
