#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "aggsent/error.hpp"

namespace aggsent {

struct SimplexSolution {
  Eigen::VectorXd beta;
  double objective = 0.0;  // beta' G beta - 2 h' beta
  bool identified = true;  // G positive definite on the simplex tangent space
};

namespace detail {

/// Orthonormal basis of { d : sum(d) = 0 } as a K x (K-1) matrix.
inline Eigen::MatrixXd tangent_basis(Eigen::Index k) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k - 1);
  for (Eigen::Index i = 0; i + 1 < k; ++i) {
    a(i, i) = 1.0;
    a(k - 1, i) = -1.0;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(k, k - 1);
}

}  // namespace detail

/// True when the quadratic form is positive definite along the simplex.
inline bool simplex_identified(const Eigen::MatrixXd& g, double rel_tol = 1e-10) {
  const Eigen::Index k = g.rows();
  if (k <= 1) return true;
  Eigen::MatrixXd t = detail::tangent_basis(k);
  Eigen::MatrixXd m = t.transpose() * g * t;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  double scale = std::max(1e-300, g.cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() > rel_tol * scale;
}

/// Minimizes beta' G beta - 2 h' beta over the probability simplex
/// { beta >= 0, sum(beta) = 1 }.
///
/// Exact active-set enumeration: the minimizer is the stationary point of
/// the equality-constrained problem on some face, so every face is solved
/// through its KKT system and the best feasible candidate kept. Faces with a
/// singular KKT system are skipped; a minimizer then also exists on a lower
/// face. G need not be positive definite. Supports up to 16 categories.
inline SimplexSolution minimize_on_simplex(const Eigen::MatrixXd& g, const Eigen::VectorXd& h) {
  const auto k = static_cast<int>(h.size());
  if (k == 0 || g.rows() != k || g.cols() != k) throw EstimationError("simplex QP: dimension mismatch");
  if (k > 16) throw EstimationError("simplex QP: more than 16 categories");

  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 1; m < (1u << k); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(),
                   [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });

  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  SimplexSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<int> idx;
  for (std::uint32_t mask : masks) {
    idx.clear();
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int r = static_cast<int>(idx.size());
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
    if (r == 1) {
      beta(idx[0]) = 1.0;
    } else {
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(r + 1, r + 1);
      Eigen::VectorXd rhs(r + 1);
      for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) kkt(a, b) = g(idx[a], idx[b]);
        kkt(a, r) = kkt(r, a) = 1.0;
        rhs(a) = h(idx[a]);
      }
      rhs(r) = 1.0;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
      lu.setThreshold(1e-12);
      if (!lu.isInvertible()) continue;
      Eigen::VectorXd x = lu.solve(rhs);
      bool feasible = true;
      for (int a = 0; a < r; ++a) {
        if (!(x(a) >= -1e-10)) {
          feasible = false;
          break;
        }
        beta(idx[a]) = std::max(0.0, x(a));
      }
      if (!feasible) continue;
      beta /= beta.sum();
    }
    double obj = beta.dot(g * beta) - 2.0 * h.dot(beta);
    if (obj < best.objective - 1e-15 * scale) {
      best.objective = obj;
      best.beta = std::move(beta);
    }
  }
  best.identified = simplex_identified(g);
  return best;
}

}  // namespace aggsent
