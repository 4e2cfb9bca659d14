#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aggsent/econometrics/fit.hpp"
#include "aggsent/error.hpp"

namespace aggsent {

/// Least squares via column-pivoted QR with HC1 robust covariance
/// n/(n-p) (X'X)^-1 X' diag(e^2) X (X'X)^-1 and BIC = n ln(RSS/n) + p ln n.
inline RegressionFit ols_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, std::vector<std::string> names,
                             double rank_tolerance = 1e-10) {
  const Eigen::Index n = X.rows(), p = X.cols();
  if (y.size() != n) throw InputError("ols: y and X differ in rows");
  if (static_cast<Eigen::Index>(names.size()) != p) throw InputError("ols: one name per column required");
  if (p == 0) throw EstimationError("ols: no regressors");
  if (n <= p) throw EstimationError("ols: need more observations than regressors");
  if (!X.allFinite() || !y.allFinite()) throw InputError("ols: non-finite input");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(rank_tolerance);
  if (qr.rank() < p) throw EstimationError("ols: design matrix is rank deficient");

  RegressionFit f;
  f.kind = FitKind::Ols;
  f.names = std::move(names);
  f.n = static_cast<std::size_t>(n);
  f.coefficients = qr.solve(y);
  f.residuals = y - X * f.coefficients;
  f.rss = f.residuals.squaredNorm();

  // (X'X)^-1 = P R^-1 R^-T P'
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv =
      r.template triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const auto& perm = qr.colsPermutation();
  const Eigen::MatrixXd bread = perm * (rinv * rinv.transpose()) * perm.transpose();

  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < n; ++i) meat.noalias() += f.residuals[i] * f.residuals[i] * X.row(i).transpose() * X.row(i);
  const double scale = static_cast<double>(n) / static_cast<double>(n - p);
  f.robust_cov = scale * bread * meat * bread;
  f.robust_cov = 0.5 * (f.robust_cov + f.robust_cov.transpose());
  f.robust_se = f.robust_cov.diagonal().cwiseMax(0.0).cwiseSqrt();

  const double dn = static_cast<double>(n);
  const double sigma2 = f.rss / dn;
  f.loglik = -0.5 * dn * (std::log(2.0 * std::numbers::pi) + std::log(sigma2) + 1.0);
  f.bic = dn * std::log(sigma2) + static_cast<double>(p) * std::log(dn);
  return f;
}

}  // namespace aggsent
