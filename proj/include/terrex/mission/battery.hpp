#pragma once

namespace terrex {

/// Linear discharge under a constant current.
struct BatteryModel {
  double capacity_ah = 1.0;          ///< nominal capacity C
  double initial_capacity_ah = 1.0;  ///< C0
  double current_a = 1.44;           ///< I0

  void validate() const;
};

/// State of charge in percent after `t` seconds:
///   (C0/C - (1/C) * I0 * t / 3600) * 100
double soc_at(double t, const BatteryModel& battery);

}  // namespace terrex
