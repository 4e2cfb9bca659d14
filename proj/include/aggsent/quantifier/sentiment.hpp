#pragma once

#include "aggsent/category.hpp"
#include "aggsent/error.hpp"

namespace aggsent {

/// Positive / (Positive + Negative); Neutral and OffTopic mass is ignored.
inline double sentiment_ratio(const CategoryDistribution& d) {
  const double pos = d[Category::Positive], neg = d[Category::Negative];
  if (!(pos + neg > 0.0)) throw UndefinedRatioError("no positive or negative mass");
  return pos / (pos + neg);
}

}  // namespace aggsent
