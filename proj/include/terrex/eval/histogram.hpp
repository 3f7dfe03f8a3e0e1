#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace terrex {

/// Ten confidence bins of width 0.1. Bin k holds (k/10, (k+1)/10]; bin 0
/// also takes 0 itself, so "mass <= k/10" is the sum of bins below k.
struct ConfidenceHistogram {
  static constexpr int kBins = 10;
  std::array<std::uint64_t, kBins> counts{};

  static int bin_of(double confidence) {
    const int b = static_cast<int>(std::ceil(confidence * kBins - 1e-9)) - 1;
    return b < 0 ? 0 : (b >= kBins ? kBins - 1 : b);
  }
  void add(double confidence) { ++counts[bin_of(confidence)]; }
  void merge(const ConfidenceHistogram& other) {
    for (int k = 0; k < kBins; ++k) counts[k] += other.counts[k];
  }
  std::uint64_t total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }
};

}  // namespace terrex
