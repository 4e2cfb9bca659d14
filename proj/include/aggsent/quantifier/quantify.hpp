#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aggsent/category.hpp"
#include "aggsent/quantifier/profile_matrix.hpp"
#include "aggsent/quantifier/simplex_qp.hpp"

namespace aggsent {

struct QuantifyResult {
  CategoryDistribution distribution;
  bool identified = true;  // false: the columns do not pin down a unique mix
};

inline CategoryDistribution to_distribution(const std::vector<Category>& cats, const Eigen::VectorXd& beta) {
  std::vector<double> p(beta.data(), beta.data() + beta.size());
  return CategoryDistribution(cats, std::move(p));
}

/// Observed test-profile frequency vector over the matrix rows. Profiles
/// absent from training go to the pooled row (or are left out of every row
/// when the matrix has none; the denominator still counts them).
inline Eigen::VectorXd profile_frequencies(std::span<const ProfileKey> test, const ProfileMatrix& pm) {
  if (test.empty()) throw EstimationError("empty test corpus");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pm.rows()));
  for (ProfileKey k : test)
    if (auto r = pm.row_of(k)) y(static_cast<Eigen::Index>(*r)) += 1.0;
  return y / static_cast<double>(test.size());
}

/// argmin over the simplex of ||y - P beta||^2, solved exactly.
inline QuantifyResult quantify_frequencies(const Eigen::VectorXd& y, const ProfileMatrix& pm) {
  if (y.size() != pm.matrix().rows()) throw EstimationError("quantify: frequency vector has wrong length");
  const auto& p = pm.matrix();
  SimplexSolution s = minimize_on_simplex(p.transpose() * p, p.transpose() * y);
  return {to_distribution(pm.categories(), s.beta), s.identified};
}

/// Category proportions of a test corpus, estimated directly from its
/// profile frequencies without classifying any document.
inline QuantifyResult quantify(std::span<const ProfileKey> test, const ProfileMatrix& pm) {
  return quantify_frequencies(profile_frequencies(test, pm), pm);
}

}  // namespace aggsent
