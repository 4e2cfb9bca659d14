#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aggsent/category.hpp"
#include "aggsent/error.hpp"

namespace aggsent {

/// A document's word-presence pattern restricted to one word subset: bit b
/// is set when the subset's b-th word occurs.
using ProfileKey = std::uint64_t;

struct ConditionalOptions {
  double alpha = 0.0;        // additive smoothing per observed profile row
  bool pool_unseen = true;   // add one row for profiles never seen in training
};

/// Estimated P(profile | category). Rows are the profiles observed in
/// training (sorted by key), optionally followed by one pooled row for
/// unseen profiles; columns follow `categories()`.
class ProfileMatrix {
 public:
  ProfileMatrix() = default;

  /// Wraps an explicit column-stochastic matrix whose row r stands for
  /// profile key r. No unseen row; no sampling-noise information.
  static ProfileMatrix from_columns(Eigen::MatrixXd m, std::vector<Category> cats) {
    if (m.cols() != static_cast<Eigen::Index>(cats.size()) || m.rows() == 0)
      throw EstimationError("profile matrix: shape does not match categories");
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if ((m.col(c).array() < 0.0).any() || std::abs(m.col(c).sum() - 1.0) > 1e-9)
        throw EstimationError("profile matrix: column is not a probability vector");
    }
    ProfileMatrix pm;
    pm.m_ = std::move(m);
    pm.cats_ = std::move(cats);
    pm.keys_.resize(static_cast<std::size_t>(pm.m_.rows()));
    for (std::size_t r = 0; r < pm.keys_.size(); ++r) pm.keys_[r] = r;
    pm.noise_var_ = Eigen::VectorXd::Zero(pm.m_.cols());
    return pm;
  }

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  const std::vector<Category>& categories() const noexcept { return cats_; }
  const std::vector<ProfileKey>& observed_keys() const noexcept { return keys_; }
  std::optional<std::size_t> unseen_row() const noexcept {
    if (!pooled_) return std::nullopt;
    return keys_.size();
  }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }

  /// Row for a profile; unseen profiles map to the pooled row, or nullopt
  /// when the matrix has none.
  std::optional<std::size_t> row_of(ProfileKey k) const noexcept {
    auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
    if (it != keys_.end() && *it == k) return static_cast<std::size_t>(it - keys_.begin());
    return unseen_row();
  }

  /// Per-category estimate of sum_r Var(P_hat[r, c]) from training sampling;
  /// zero for matrices given explicitly.
  const Eigen::VectorXd& noise_variance() const noexcept { return noise_var_; }

  /// Gram matrix P'P, optionally with the sampling-noise diagonal removed.
  Eigen::MatrixXd gram(bool debias) const {
    Eigen::MatrixXd g = m_.transpose() * m_;
    if (debias) g.diagonal() -= noise_var_;
    return g;
  }

  friend ProfileMatrix estimate_conditional_matrix(std::span<const ProfileKey>, std::span<const Category>,
                                                   std::span<const Category>, const ConditionalOptions&);

 private:
  Eigen::MatrixXd m_;
  std::vector<Category> cats_;
  std::vector<ProfileKey> keys_;
  Eigen::VectorXd noise_var_;
  bool pooled_ = false;
};

/// Column c is the distribution of profiles among training documents
/// labeled c: (count + alpha) / (n_c + alpha * R) over the R observed
/// profiles. With pooling, column c gives the unseen row the leave-one-out
/// unseen mass u_c (share of c's documents whose profile occurs exactly once
/// in the whole training set) and scales the observed rows by 1 - u_c.
inline ProfileMatrix estimate_conditional_matrix(std::span<const ProfileKey> keys, std::span<const Category> labels,
                                                 std::span<const Category> categories,
                                                 const ConditionalOptions& opt = {}) {
  if (keys.size() != labels.size()) throw EstimationError("conditional matrix: keys/labels size mismatch");
  if (categories.empty()) throw EstimationError("conditional matrix: no categories");
  if (opt.alpha < 0.0) throw ConfigError("smoothing alpha must be >= 0");
  const auto k = static_cast<Eigen::Index>(categories.size());
  auto col_of = [&](Category c) -> Eigen::Index {
    for (Eigen::Index i = 0; i < k; ++i)
      if (categories[static_cast<std::size_t>(i)] == c) return i;
    return -1;
  };

  ProfileMatrix pm;
  pm.cats_.assign(categories.begin(), categories.end());
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (col_of(labels[i]) >= 0) pm.keys_.push_back(keys[i]);
  std::sort(pm.keys_.begin(), pm.keys_.end());
  pm.keys_.erase(std::unique(pm.keys_.begin(), pm.keys_.end()), pm.keys_.end());
  const auto r_obs = static_cast<Eigen::Index>(pm.keys_.size());

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(r_obs, k);
  std::vector<Eigen::Index> row_idx(keys.size(), -1);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    Eigen::Index c = col_of(labels[i]);
    if (c < 0) continue;
    auto r = static_cast<Eigen::Index>(std::lower_bound(pm.keys_.begin(), pm.keys_.end(), keys[i]) - pm.keys_.begin());
    row_idx[i] = r;
    counts(r, c) += 1.0;
  }
  Eigen::VectorXd n_c = counts.colwise().sum().transpose();
  for (Eigen::Index c = 0; c < k; ++c)
    if (n_c(c) == 0.0)
      throw EstimationError("category " + std::string(to_string(categories[static_cast<std::size_t>(c)])) +
                            " has no training documents");

  Eigen::VectorXd unseen = Eigen::VectorXd::Zero(k);
  if (opt.pool_unseen) {
    Eigen::VectorXd row_total = counts.rowwise().sum();
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (row_idx[i] >= 0 && row_total(row_idx[i]) == 1.0) unseen(col_of(labels[i])) += 1.0;
    unseen = unseen.cwiseQuotient(n_c);
  }

  pm.pooled_ = opt.pool_unseen;
  pm.m_ = Eigen::MatrixXd::Zero(r_obs + (opt.pool_unseen ? 1 : 0), k);
  pm.noise_var_ = Eigen::VectorXd::Zero(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const double denom = n_c(c) + opt.alpha * static_cast<double>(r_obs);
    pm.m_.col(c).head(r_obs) = (counts.col(c).array() + opt.alpha) / denom * (1.0 - unseen(c));
    if (opt.pool_unseen) pm.m_(r_obs, c) = unseen(c);
    // Multinomial estimate of the summed entry variance, carried through the
    // smoothing and unseen-mass scaling.
    if (n_c(c) > 1.0) {
      Eigen::VectorXd emp = counts.col(c) / n_c(c);
      const double shrink = n_c(c) / denom * (1.0 - unseen(c));
      pm.noise_var_(c) = (1.0 - emp.squaredNorm()) / (n_c(c) - 1.0) * shrink * shrink;
    }
  }
  return pm;
}

}  // namespace aggsent
