#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "aggsent/econometrics/fit.hpp"
#include "aggsent/error.hpp"

namespace aggsent {

struct NegBinOptions {
  std::size_t max_iterations = 1000;
  double gradient_tolerance = 1e-9;  // on max |score|, relative to max(1, n)
  double min_log_alpha = -30.0;      // below this the Poisson limit is reported
};

namespace detail {

inline double lgam(double x) { return boost::math::lgamma(x); }

/// NB2 log-likelihood of one observation; alpha = 0 gives the Poisson term.
inline double nb2_loglik_obs(double y, double mu, double alpha) {
  if (alpha <= 0.0) return y * std::log(mu) - mu - lgam(y + 1.0);
  const double r = 1.0 / alpha;
  return lgam(y + r) - lgam(r) - lgam(y + 1.0) + r * std::log(r / (r + mu)) + (y > 0.0 ? y * std::log(mu / (r + mu)) : 0.0);
}

class NegBinProblem {
 public:
  NegBinProblem(std::span<const double> y, const Eigen::MatrixXd& X, std::span<const double> exposure)
      : y_(y), X_(X), off_(X.rows()) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) off_[i] = std::log(exposure[static_cast<std::size_t>(i)]);
  }

  Eigen::Index n() const { return X_.rows(); }
  Eigen::Index p() const { return X_.cols(); }
  const Eigen::MatrixXd& X() const { return X_; }
  double y(Eigen::Index i) const { return y_[static_cast<std::size_t>(i)]; }

  double mu(const Eigen::VectorXd& beta, Eigen::Index i) const {
    return std::exp(off_[i] + X_.row(i).dot(beta.head(p())));
  }

  /// theta = (beta, ln alpha).
  double loglik(const Eigen::VectorXd& theta) const {
    const double alpha = std::exp(theta[p()]);
    double s = 0.0;
    for (Eigen::Index i = 0; i < n(); ++i) s += nb2_loglik_obs(y(i), mu(theta, i), alpha);
    return s;
  }

  /// Per-observation scores, one row per observation.
  Eigen::MatrixXd scores(const Eigen::VectorXd& theta) const {
    const double alpha = std::exp(theta[p()]);
    const double r = 1.0 / alpha;
    Eigen::MatrixXd s(n(), p() + 1);
    for (Eigen::Index i = 0; i < n(); ++i) {
      const double m = mu(theta, i), yi = y(i);
      const double d_eta = r * (yi - m) / (r + m);
      s.row(i).head(p()) = d_eta * X_.row(i);
      const double d_r = boost::math::digamma(yi + r) - boost::math::digamma(r) + std::log(r / (r + m)) +
                         (m - yi) / (r + m);
      s(i, p()) = -r * d_r;
    }
    return s;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const { return scores(theta).colwise().sum().transpose(); }

  /// Central-difference Jacobian of the analytic gradient, symmetrized.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& theta) const {
    const Eigen::Index k = theta.size();
    Eigen::MatrixXd h(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const double step = 1e-5 * std::max(1.0, std::abs(theta[j]));
      Eigen::VectorXd a = theta, b = theta;
      a[j] += step;
      b[j] -= step;
      h.col(j) = (gradient(a) - gradient(b)) / (2.0 * step);
    }
    return 0.5 * (h + h.transpose());
  }

 private:
  std::span<const double> y_;
  const Eigen::MatrixXd& X_;
  Eigen::VectorXd off_;
};

/// Poisson GLM with log link and offset, by IRLS.
inline Eigen::VectorXd poisson_irls(std::span<const double> y, const Eigen::MatrixXd& X,
                                    std::span<const double> exposure, std::size_t max_iter = 200) {
  const Eigen::Index n = X.rows(), p = X.cols();
  Eigen::VectorXd off(n), yv(n);
  double sy = 0.0, se = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    off[i] = std::log(exposure[static_cast<std::size_t>(i)]);
    yv[i] = y[static_cast<std::size_t>(i)];
    sy += yv[i];
    se += exposure[static_cast<std::size_t>(i)];
  }
  if (!(sy > 0.0)) throw ConvergenceError("count model: all counts are zero, rate MLE diverges");
  // Start from the working response of a constant-rate fit.
  Eigen::VectorXd eta = off.array() + std::log(sy / se);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (std::size_t it = 0; it < max_iter; ++it) {
    Eigen::VectorXd mu = eta.array().exp();
    Eigen::VectorXd z = (eta - off).array() + (yv - mu).array() / mu.array();
    Eigen::VectorXd sw = mu.array().sqrt();
    Eigen::VectorXd next = (sw.asDiagonal() * X).colPivHouseholderQr().solve(sw.cwiseProduct(z));
    if (!next.allFinite()) throw ConvergenceError("poisson start: non-finite coefficients");
    const double change = (next - beta).cwiseAbs().maxCoeff();
    beta = next;
    eta = off + X * beta;
    if (it > 0 && change < 1e-12 * std::max(1.0, beta.cwiseAbs().maxCoeff())) return beta;
  }
  return beta;
}

}  // namespace detail

/// NB2 maximum likelihood (variance mu + alpha mu^2) with log link and
/// ln(exposure) offset. BFGS over (beta, ln alpha) from a Poisson start,
/// finished with Newton steps. Robust covariance is the score sandwich
/// H^-1 (sum s s') H^-1 scaled by n/(n-1). When the dispersion score at
/// alpha = 0 is not positive the Poisson fit is returned with alpha = 0
/// and `poisson_limit` set.
inline RegressionFit negbin_fit(std::span<const double> counts, const Eigen::MatrixXd& X,
                                std::span<const double> exposure, std::vector<std::string> names,
                                const NegBinOptions& opt = {}) {
  const Eigen::Index n = X.rows(), p = X.cols();
  if (static_cast<Eigen::Index>(counts.size()) != n || static_cast<Eigen::Index>(exposure.size()) != n)
    throw InputError("negbin: counts, exposure and X differ in rows");
  if (static_cast<Eigen::Index>(names.size()) != p) throw InputError("negbin: one name per column required");
  if (n <= p) throw EstimationError("negbin: need more observations than regressors");
  for (double c : counts)
    if (!(c >= 0.0) || c != std::floor(c)) throw InputError("negbin: counts must be nonnegative integers");
  for (double e : exposure)
    if (!(e > 0.0) || !std::isfinite(e)) throw InputError("negbin: exposure must be positive");
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) throw EstimationError("negbin: design matrix is rank deficient");
  }

  detail::NegBinProblem prob(counts, X, exposure);
  const Eigen::VectorXd beta0 = detail::poisson_irls(counts, X, exposure);

  RegressionFit f;
  f.kind = FitKind::NegBin;
  f.names = std::move(names);
  f.n = static_cast<std::size_t>(n);
  const double dn = static_cast<double>(n);

  // Dispersion score at alpha = 0, evaluated at the Poisson fit.
  double score0 = 0.0, mom_num = 0.0, mom_den = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = prob.mu(beta0, i), d = prob.y(i) - m;
    score0 += 0.5 * (d * d - prob.y(i));
    mom_num += d * d - m;
    mom_den += m * m;
  }

  auto finish_poisson = [&](const Eigen::VectorXd& beta) {
    f.coefficients = beta;
    f.alpha = 0.0;
    f.alpha_se = 0.0;
    f.poisson_limit = true;
    Eigen::MatrixXd s(n, p);
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(p, p);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = prob.mu(beta, i);
      s.row(i) = (prob.y(i) - m) * X.row(i);
      info.noalias() += m * X.row(i).transpose() * X.row(i);
      ll += detail::nb2_loglik_obs(prob.y(i), m, 0.0);
    }
    const Eigen::MatrixXd inv = info.inverse();
    f.robust_cov = dn / (dn - 1.0) * inv * (s.transpose() * s) * inv;
    f.robust_se = f.robust_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    f.loglik = ll;
    f.converged = true;
    return f;
  };

  if (score0 <= 0.0) return finish_poisson(beta0);

  Eigen::VectorXd theta(p + 1);
  theta.head(p) = beta0;
  theta[p] = std::log(std::max(mom_num / mom_den, 0.01));

  auto objective = [&](const Eigen::VectorXd& t) { return -prob.loglik(t); };
  auto grad = [&](const Eigen::VectorXd& t) -> Eigen::VectorXd { return -prob.gradient(t); };

  const double gtol = opt.gradient_tolerance * std::max(1.0, dn);
  double fval = objective(theta);
  Eigen::VectorXd g = grad(theta);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(p + 1, p + 1);
  {
    // Scale the initial inverse Hessian by the observed curvature.
    const Eigen::MatrixXd h = -prob.hessian(theta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.eigenvalues().minCoeff() > 0.0) hinv = h.inverse();
  }
  bool converged = false;
  std::size_t it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (g.cwiseAbs().maxCoeff() < gtol) {
      converged = true;
      break;
    }
    Eigen::VectorXd dir = -hinv * g;
    if (!(dir.dot(g) < 0.0)) {
      hinv = Eigen::MatrixXd::Identity(p + 1, p + 1);
      dir = -g;
    }
    // Backtracking line search with Armijo condition.
    double step = 1.0;
    Eigen::VectorXd next;
    double fnext = std::numeric_limits<double>::infinity();
    for (int ls = 0; ls < 60; ++ls) {
      next = theta + step * dir;
      fnext = objective(next);
      if (std::isfinite(fnext) && fnext <= fval + 1e-4 * step * g.dot(dir)) break;
      step *= 0.5;
    }
    if (!std::isfinite(fnext) || fnext > fval) {
      // No descent possible at machine precision.
      converged = g.cwiseAbs().maxCoeff() < std::sqrt(gtol);
      break;
    }
    const Eigen::VectorXd gnext = grad(next);
    const Eigen::VectorXd s = next - theta, yv = gnext - g;
    const double sy = s.dot(yv);
    if (sy > 1e-14 * s.norm() * yv.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p + 1, p + 1);
      hinv = (I - rho * s * yv.transpose()) * hinv * (I - rho * yv * s.transpose()) + rho * s * s.transpose();
    }
    theta = next;
    fval = fnext;
    g = gnext;
    if (theta[p] < opt.min_log_alpha) break;
  }

  if (theta[p] < opt.min_log_alpha) return finish_poisson(detail::poisson_irls(counts, X, exposure));

  // Newton polish: quadratic convergence from the BFGS neighbourhood.
  for (int k = 0; k < 8; ++k) {
    const Eigen::MatrixXd h = prob.hessian(theta);
    const Eigen::VectorXd gg = prob.gradient(theta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-h);
    if (!(es.eigenvalues().minCoeff() > 0.0)) break;
    const Eigen::VectorXd next = theta - h.ldlt().solve(gg);
    if (!(objective(next) <= objective(theta) + 1e-12 * std::max(1.0, std::abs(fval)))) break;
    const double change = (next - theta).cwiseAbs().maxCoeff();
    theta = next;
    if (prob.gradient(theta).cwiseAbs().maxCoeff() < gtol) converged = true;
    if (change < 1e-13) break;
  }
  if (!converged) throw ConvergenceError("negbin: no convergence after " + std::to_string(it) + " iterations");

  f.iterations = it;
  f.coefficients = theta.head(p);
  f.alpha = std::exp(theta[p]);
  f.loglik = prob.loglik(theta);
  const Eigen::MatrixXd h = prob.hessian(theta);
  const Eigen::MatrixXd s = prob.scores(theta);
  const Eigen::MatrixXd hin = h.inverse();
  const Eigen::MatrixXd cov = dn / (dn - 1.0) * hin * (s.transpose() * s) * hin;
  f.robust_cov = 0.5 * (cov.topLeftCorner(p, p) + cov.topLeftCorner(p, p).transpose());
  f.robust_se = f.robust_cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  f.alpha_se = *f.alpha * std::sqrt(std::max(0.0, cov(p, p)));
  f.converged = true;
  return f;
}

/// NB2 log-likelihood at given (beta, alpha); alpha = 0 is the Poisson limit.
inline double negbin_loglik(std::span<const double> counts, const Eigen::MatrixXd& X, std::span<const double> exposure,
                            const Eigen::VectorXd& beta, double alpha) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double mu = exposure[k] * std::exp(X.row(i).dot(beta));
    s += detail::nb2_loglik_obs(counts[k], mu, alpha);
  }
  return s;
}

}  // namespace aggsent
