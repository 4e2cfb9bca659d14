#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "aggsent/error.hpp"

namespace aggsent {

/// Linear-interpolation quantile (type 7), p in [0,1].
inline double empirical_quantile(std::vector<double> v, double p) {
  if (v.empty()) throw EstimationError("quantile of empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace aggsent
