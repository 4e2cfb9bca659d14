#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aggsent/error.hpp"

namespace aggsent::synth {

struct GridSimplexResult {
  std::vector<double> beta;
  double objective = 0.0;  // ||y - P beta||^2
};

/// Grid minimizer of ||y - P beta||^2 over simplex points whose coordinates
/// are multiples of `step` (1/step must be an integer). For three
/// categories every value of the first coordinate is enumerated and the
/// convex one-dimensional problem in the second is minimized over its grid
/// points exactly.
inline GridSimplexResult oracle_simplex_ls(const Eigen::VectorXd& y, const Eigen::MatrixXd& P, double step) {
  const Eigen::Index k = P.cols();
  if (k < 1 || k > 3) throw ConfigError("grid oracle: 1 to 3 categories supported");
  if (P.rows() != y.size()) throw InputError("grid oracle: y and P differ in rows");
  if (!(step > 0.0 && step <= 1e-3)) throw ConfigError("grid oracle: step must be in (0, 1e-3]");
  const double nd = std::round(1.0 / step);
  if (std::abs(nd * step - 1.0) > 1e-9) throw ConfigError("grid oracle: 1/step must be an integer");
  const auto N = static_cast<long long>(nd);

  auto obj = [&](const Eigen::VectorXd& b) { return (y - P * b).squaredNorm(); };
  GridSimplexResult best;
  best.objective = std::numeric_limits<double>::infinity();
  auto consider = [&](const Eigen::VectorXd& b) {
    const double f = obj(b);
    if (f < best.objective) {
      best.objective = f;
      best.beta.assign(b.data(), b.data() + b.size());
    }
  };

  if (k == 1) {
    consider(Eigen::VectorXd::Ones(1));
    return best;
  }
  if (k == 2) {
    Eigen::VectorXd b(2);
    for (long long i = 0; i <= N; ++i) {
      b << static_cast<double>(i) / nd, static_cast<double>(N - i) / nd;
      consider(b);
    }
    return best;
  }
  // Along a row with beta_0 fixed, beta = base + t * (0, 1, -1) / N for
  // integer t in [0, M]; the objective is a convex quadratic in t.
  const Eigen::Vector3d dir(0.0, 1.0 / nd, -1.0 / nd);
  const Eigen::VectorXd pd = P * dir;
  const double a = pd.squaredNorm();
  Eigen::VectorXd b(3);
  for (long long i = 0; i <= N; ++i) {
    const long long m = N - i;
    const Eigen::Vector3d base(static_cast<double>(i) / nd, 0.0, static_cast<double>(m) / nd);
    const Eigen::VectorXd r0 = y - P * base;
    // f(t) = ||r0 - t pd||^2 = a t^2 - 2 (r0.pd) t + const
    std::array<long long, 4> cands{0, m, 0, 0};
    if (a > 0.0) {
      const double t = std::clamp(r0.dot(pd) / a, 0.0, static_cast<double>(m));
      cands[2] = static_cast<long long>(std::floor(t));
      cands[3] = std::min(m, cands[2] + 1);
    }
    for (long long t : cands) {
      b << static_cast<double>(i) / nd, static_cast<double>(t) / nd, static_cast<double>(m - t) / nd;
      consider(b);
    }
  }
  return best;
}

struct NegBinGridResult {
  Eigen::VectorXd beta;
  double alpha = 0.0;
  double loglik = -std::numeric_limits<double>::infinity();
  bool alpha_at_floor = false;  // optimum at the smallest alpha in the box
};

struct ParamBox {
  std::vector<double> lo, hi;  // beta coordinates, then alpha (alpha >= 0)
};

/// NB2 log-likelihood written directly from the gamma-Poisson mixture form.
inline double oracle_nb_loglik(std::span<const double> y, const Eigen::MatrixXd& X, std::span<const double> exposure,
                               const Eigen::VectorXd& beta, double alpha) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double mu = exposure[k] * std::exp(X.row(i).dot(beta));
    const double yi = y[k];
    if (alpha == 0.0) {
      s += yi * std::log(mu) - mu - std::lgamma(yi + 1.0);
    } else {
      const double r = 1.0 / alpha;
      s += std::lgamma(yi + r) - std::lgamma(r) - std::lgamma(yi + 1.0) + r * std::log(r) - (r + yi) * std::log(r + mu) +
           (yi > 0.0 ? yi * std::log(mu) : 0.0);
    }
  }
  return s;
}

/// Exhaustive grid over the box at `step`, then one local refinement pass:
/// repeated grids of +-10 cells around the incumbent, shrinking the cell by
/// 5x per level until it is below `final_step`. Throws when the coarse
/// optimum touches the box in a beta coordinate or at the upper alpha
/// bound; the lower alpha bound is reported through `alpha_at_floor`.
inline NegBinGridResult oracle_negbin_grid(std::span<const double> y, const Eigen::MatrixXd& X,
                                           std::span<const double> exposure, const ParamBox& box, double step,
                                           double final_step = 1e-7) {
  const auto p = static_cast<std::size_t>(X.cols());
  if (p < 1 || p > 3) throw ConfigError("negbin grid oracle: at most two covariates plus intercept");
  if (box.lo.size() != p + 1 || box.hi.size() != p + 1) throw ConfigError("negbin grid oracle: box dimension");
  if (box.lo[p] < 0.0) throw ConfigError("negbin grid oracle: alpha bound must be >= 0");
  if (!(step > 0.0)) throw ConfigError("negbin grid oracle: step must be positive");
  const std::size_t d = p + 1;
  std::vector<long long> cells(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (!(box.hi[j] > box.lo[j])) throw ConfigError("negbin grid oracle: empty box");
    cells[j] = static_cast<long long>(std::floor((box.hi[j] - box.lo[j]) / step + 1e-9));
  }

  auto eval = [&](const std::vector<double>& v) {
    Eigen::VectorXd beta(static_cast<Eigen::Index>(p));
    for (std::size_t j = 0; j < p; ++j) beta[static_cast<Eigen::Index>(j)] = v[j];
    return oracle_nb_loglik(y, X, exposure, beta, v[p]);
  };

  std::vector<double> best_v(d);
  std::vector<long long> best_idx(d);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<long long> idx(d, 0);
  std::vector<double> v(d);
  for (;;) {
    for (std::size_t j = 0; j < d; ++j) v[j] = box.lo[j] + static_cast<double>(idx[j]) * step;
    const double f = eval(v);
    if (f > best) {
      best = f;
      best_v = v;
      best_idx = idx;
    }
    std::size_t j = 0;
    while (j < d && ++idx[j] > cells[j]) idx[j++] = 0;
    if (j == d) break;
  }
  for (std::size_t j = 0; j < p; ++j)
    if (best_idx[j] == 0 || best_idx[j] == cells[j])
      throw EstimationError("negbin grid oracle: optimum on the box boundary; widen the bounds");
  if (best_idx[p] == cells[p]) throw EstimationError("negbin grid oracle: alpha at upper bound; widen the bounds");
  const bool floor = best_idx[p] == 0;

  for (double h = step / 5.0; h >= final_step / 5.0; h /= 5.0) {
    const std::vector<double> c = best_v;
    std::vector<long long> off(d, -10);
    for (;;) {
      bool ok = true;
      for (std::size_t j = 0; j < d; ++j) {
        v[j] = c[j] + static_cast<double>(off[j]) * h;
        if (j == p && v[j] < box.lo[p]) ok = false;
      }
      if (ok) {
        const double f = eval(v);
        if (f > best) {
          best = f;
          best_v = v;
        }
      }
      std::size_t j = 0;
      while (j < d && ++off[j] > 10) off[j++] = -10;
      if (j == d) break;
    }
  }

  NegBinGridResult r;
  r.beta.resize(static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) r.beta[static_cast<Eigen::Index>(j)] = best_v[j];
  r.alpha = best_v[p];
  r.loglik = best;
  r.alpha_at_floor = floor && best_v[p] <= box.lo[p] + step;
  return r;
}

}  // namespace aggsent::synth
