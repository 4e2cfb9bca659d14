#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aggsent/quantifier/ensemble.hpp"

namespace aggsent {

/// Bernoulli naive Bayes over vocabulary presence, with Laplace-smoothed
/// word rates and the training set's category shares as priors. Only used
/// as the classify-and-count baseline.
class NaiveProfileClassifier {
 public:
  NaiveProfileClassifier(const LabeledProfiles& train, std::vector<Category> cats) : cats_(std::move(cats)) {
    if (cats_.empty()) cats_ = train.categories_present();
    const auto k = static_cast<Eigen::Index>(cats_.size());
    const auto v = static_cast<Eigen::Index>(train.vocab_size);
    Eigen::MatrixXd df = Eigen::MatrixXd::Zero(v, k);
    Eigen::VectorXd n = Eigen::VectorXd::Zero(k);
    for (std::size_t i = 0; i < train.labels.size(); ++i) {
      Eigen::Index c = col_of(train.labels[i]);
      if (c < 0) continue;
      n(c) += 1.0;
      for (std::uint32_t w : train.profiles[i]) df(w, c) += 1.0;
    }
    if ((n.array() == 0.0).any()) throw EstimationError("classify-and-count: a category has no training documents");
    log_ratio_.resize(v, k);
    base_.resize(k);
    for (Eigen::Index c = 0; c < k; ++c) {
      double b = std::log(n(c) / n.sum());
      for (Eigen::Index w = 0; w < v; ++w) {
        const double th = (df(w, c) + 1.0) / (n(c) + 2.0);
        log_ratio_(w, c) = std::log(th) - std::log1p(-th);
        b += std::log1p(-th);
      }
      base_(c) = b;
    }
  }

  const std::vector<Category>& categories() const noexcept { return cats_; }

  /// Index into categories() of the max-posterior class (ties: lowest).
  std::size_t predict_index(const TokenProfile& p) const {
    Eigen::VectorXd s = base_;
    for (std::uint32_t w : p)
      if (w < log_ratio_.rows()) s += log_ratio_.row(w).transpose();
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < s.size(); ++c)
      if (s(c) > s(best)) best = c;
    return static_cast<std::size_t>(best);
  }

  Category predict(const TokenProfile& p) const { return cats_[predict_index(p)]; }

 private:
  Eigen::Index col_of(Category c) const {
    for (std::size_t i = 0; i < cats_.size(); ++i)
      if (cats_[i] == c) return static_cast<Eigen::Index>(i);
    return -1;
  }

  std::vector<Category> cats_;
  Eigen::MatrixXd log_ratio_;
  Eigen::VectorXd base_;
};

/// Classify every test document, then count.
inline CategoryDistribution classify_and_count(std::span<const TokenProfile> test, const NaiveProfileClassifier& clf) {
  if (test.empty()) throw EstimationError("empty test corpus");
  std::vector<double> counts(clf.categories().size(), 0.0);
  for (const auto& p : test) counts[clf.predict_index(p)] += 1.0;
  for (double& c : counts) c /= static_cast<double>(test.size());
  return CategoryDistribution(clf.categories(), std::move(counts));
}

inline CategoryDistribution classify_and_count(std::span<const TokenProfile> test, const LabeledProfiles& train,
                                               std::vector<Category> cats = {}) {
  return classify_and_count(test, NaiveProfileClassifier(train, std::move(cats)));
}

}  // namespace aggsent
