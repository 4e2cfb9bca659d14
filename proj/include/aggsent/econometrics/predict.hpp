#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "aggsent/econometrics/fit.hpp"
#include "aggsent/error.hpp"

namespace aggsent {

/// Covariate values by coefficient name. The intercept column, when named
/// `const`, defaults to 1 if omitted.
using CovariateRow = std::map<std::string, double>;

inline constexpr const char* kConstName = "const";

/// exposure * exp(x'beta) for each grid row. Every row must name exactly the
/// fit's coefficients.
inline std::vector<double> predict_counts(const RegressionFit& fit, const std::vector<CovariateRow>& grid,
                                          double exposure) {
  if (!(exposure > 0.0)) throw InputError("predict: exposure must be positive");
  std::vector<double> out;
  out.reserve(grid.size());
  for (const auto& row : grid) {
    for (const auto& [k, v] : row)
      if (std::find(fit.names.begin(), fit.names.end(), k) == fit.names.end())
        throw InputError("predict: '" + k + "' is not a fitted coefficient");
    double eta = 0.0;
    for (std::size_t j = 0; j < fit.names.size(); ++j) {
      auto it = row.find(fit.names[j]);
      double x;
      if (it != row.end())
        x = it->second;
      else if (fit.names[j] == kConstName)
        x = 1.0;
      else
        throw InputError("predict: grid row lacks '" + fit.names[j] + "'");
      eta += x * fit.coefficients[static_cast<Eigen::Index>(j)];
    }
    out.push_back(exposure * std::exp(eta));
  }
  return out;
}

}  // namespace aggsent
