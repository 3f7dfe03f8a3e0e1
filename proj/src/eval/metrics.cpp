#include "terrex/eval/metrics.hpp"

#include <cmath>

namespace terrex {

double derive_threshold(const ConfidenceHistogram& hist, double tail) {
  if (!(tail > 0.0 && tail < 1.0)) throw ConfigError("tail fraction must lie in (0, 1)");
  const std::uint64_t total = hist.total();
  if (total == 0) throw ConfigError("confidence histogram is empty");
  double best = 0.0;
  std::uint64_t below = 0;
  for (int k = 0; k <= ConfidenceHistogram::kBins; ++k) {
    if (k > 0) below += hist.counts[k - 1];
    const double mass = static_cast<double>(below) / static_cast<double>(total);
    if (mass <= tail + 1e-12) best = static_cast<double>(k) / ConfidenceHistogram::kBins;
  }
  return best;
}

std::optional<double> low_confidence_ratio(const GlobalConfidenceMap& global, double threshold) {
  std::size_t observed = 0, low = 0;
  global.for_each([&](CellIndex, double c) {
    ++observed;
    if (c <= threshold) ++low;
  });
  if (observed == 0) return std::nullopt;
  return 100.0 * static_cast<double>(low) / static_cast<double>(observed);
}

Curve exploration_curve(const MissionRecord& record, double sample_dt, double horizon) {
  if (!(sample_dt > 0.0)) throw ConfigError("curve sample step must be positive");
  Curve out;
  const long n = std::lround(std::floor(horizon / sample_dt + 1e-9));
  std::size_t next = 0;
  double value = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * sample_dt;
    while (next < record.iterations.size() && record.iterations[next].t <= t + 1e-9)
      value = record.iterations[next++].explored_volume;
    out.emplace_back(t, value);
  }
  return out;
}

Curve average_curves(const std::vector<Curve>& curves) {
  if (curves.empty()) return {};
  Curve out = curves.front();
  for (auto& p : out) p.second = 0.0;
  for (const Curve& c : curves) {
    if (c.size() != out.size()) throw InvariantViolation("curves sampled on different grids");
    for (std::size_t k = 0; k < c.size(); ++k) out[k].second += c[k].second;
  }
  for (auto& p : out) p.second /= static_cast<double>(curves.size());
  return out;
}

}  // namespace terrex
