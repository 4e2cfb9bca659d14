#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "aggsent/error.hpp"

namespace aggsent {

enum class FitKind { Ols, NegBin };

struct RegressionFit {
  FitKind kind = FitKind::Ols;
  std::vector<std::string> names;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd robust_se;
  Eigen::MatrixXd robust_cov;
  double loglik = 0.0;  // Gaussian for OLS, NB2 (pseudo-)likelihood for count models
  std::optional<double> bic;
  std::size_t n = 0;
  bool converged = true;
  std::size_t iterations = 0;
  // Count models only.
  std::optional<double> alpha;
  std::optional<double> alpha_se;
  bool poisson_limit = false;
  // OLS only.
  Eigen::VectorXd residuals;
  double rss = 0.0;

  std::size_t p() const noexcept { return names.size(); }

  Eigen::Index index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<Eigen::Index>(i);
    throw InputError("no coefficient named '" + name + "'");
  }
  double coef(const std::string& name) const { return coefficients[index_of(name)]; }
  double se(const std::string& name) const { return robust_se[index_of(name)]; }

  /// Two-sided p-value: Student t with n-p df for OLS, normal for count models.
  double p_value(std::size_t j) const {
    const double se_j = robust_se[static_cast<Eigen::Index>(j)];
    if (!(se_j > 0.0)) return coefficients[static_cast<Eigen::Index>(j)] == 0.0 ? 1.0 : 0.0;
    const double z = std::abs(coefficients[static_cast<Eigen::Index>(j)] / se_j);
    if (kind == FitKind::Ols && n > p()) {
      boost::math::students_t dist(static_cast<double>(n - p()));
      return 2.0 * boost::math::cdf(boost::math::complement(dist, z));
    }
    return 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(), z));
  }

  /// Critical value for a two-sided interval at the given level.
  double critical_value(double level = 0.95) const {
    const double q = 0.5 + level / 2.0;
    if (kind == FitKind::Ols && n > p())
      return boost::math::quantile(boost::math::students_t(static_cast<double>(n - p())), q);
    return boost::math::quantile(boost::math::normal(), q);
  }
};

/// Significance marks: + p<0.10, * p<0.05, ** p<0.01, *** p<0.001.
inline std::string stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  if (p < 0.10) return "+";
  return "";
}

}  // namespace aggsent
