#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aggsent/category.hpp"
#include "aggsent/corpus/vocabulary.hpp"
#include "aggsent/error.hpp"
#include "aggsent/quantifier/profile_matrix.hpp"
#include "aggsent/quantifier/quantify.hpp"
#include "aggsent/util/parallel.hpp"
#include "aggsent/util/random.hpp"

namespace aggsent {

/// How per-subset fits are combined.
enum class EnsemblePooling {
  Mean,     // average the per-subset simplex solutions, renormalize
  Stacked,  // one simplex solve on the summed normal equations of all subsets
};

struct QuantifyConfig {
  std::size_t n_subsets = 50;
  std::size_t words_per_subset = 12;
  std::size_t bootstrap_reps = 200;
  std::uint64_t rng_seed = 1;
  ConditionalOptions conditional{};
  EnsemblePooling pooling = EnsemblePooling::Stacked;
  /// Subtract the training-noise diagonal from each Gram matrix. Without it
  /// the least-squares fit is attenuated toward the training-set mix.
  bool debias = true;
  /// Categories to estimate; empty means every category present in training.
  std::vector<Category> categories;

  void validate(std::size_t vocab_size) const {
    if (n_subsets < 1 || words_per_subset < 1 || bootstrap_reps < 1)
      throw ConfigError("n_subsets, words_per_subset and bootstrap_reps must be >= 1");
    if (words_per_subset > 63) throw ConfigError("words_per_subset must be <= 63");
    if (words_per_subset > vocab_size)
      throw ConfigError("words_per_subset (" + std::to_string(words_per_subset) + ") exceeds vocabulary size (" +
                        std::to_string(vocab_size) + ")");
  }
};

/// Training documents already mapped to vocabulary profiles.
struct LabeledProfiles {
  std::vector<TokenProfile> profiles;
  std::vector<Category> labels;
  std::size_t vocab_size = 0;

  std::vector<Category> categories_present() const {
    std::vector<Category> out;
    for (Category c : kAllCategories)
      for (Category l : labels)
        if (l == c) {
          out.push_back(c);
          break;
        }
    return out;
  }
};

struct EnsembleResult {
  CategoryDistribution distribution;
  bool identified = true;
  std::size_t non_identified_subsets = 0;  // Mean pooling only
};

/// Random-subspace quantifier fitted on a training set: one conditional
/// profile matrix per random word subset. Immutable after construction and
/// safe to share across threads.
class FittedEnsemble {
 public:
  static constexpr std::uint32_t kNoRow = std::numeric_limits<std::uint32_t>::max();

  /// Test corpus mapped onto every subset's rows.
  struct Encoded {
    std::size_t n_docs = 0;
    std::vector<std::uint32_t> rows;  // n_docs x n_subsets, doc-major; Mean pooling
    Eigen::MatrixXd contrib;          // K x n_docs: sum over subsets of the doc's matrix row; Stacked pooling
  };

  FittedEnsemble(const LabeledProfiles& train, QuantifyConfig cfg, unsigned threads = 1) : cfg_(std::move(cfg)) {
    if (train.profiles.size() != train.labels.size()) throw EstimationError("training profiles/labels mismatch");
    cfg_.validate(train.vocab_size);
    if (cfg_.categories.empty()) cfg_.categories = train.categories_present();
    if (cfg_.categories.empty()) throw EstimationError("empty training set");
    vocab_size_ = train.vocab_size;
    const std::size_t s_count = cfg_.n_subsets;
    subsets_.resize(s_count);
    for (std::size_t s = 0; s < s_count; ++s) {
      Rng rng = Rng::substream(cfg_.rng_seed, {0x5b5e75ULL, s});
      subsets_[s] = sample_without_replacement(static_cast<std::uint32_t>(vocab_size_),
                                               static_cast<std::uint32_t>(cfg_.words_per_subset), rng);
    }
    build_membership();
    matrices_.resize(s_count);
    grams_.resize(s_count);
    parallel_for(s_count, threads, [&](std::size_t s) {
      std::vector<ProfileKey> keys(train.profiles.size());
      for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = key(train.profiles[i], s);
      matrices_[s] = estimate_conditional_matrix(keys, train.labels, cfg_.categories, cfg_.conditional);
      grams_[s] = matrices_[s].gram(cfg_.debias);
    });
    const auto k = static_cast<Eigen::Index>(cfg_.categories.size());
    gram_total_ = Eigen::MatrixXd::Zero(k, k);
    for (const auto& g : grams_) gram_total_ += g;
  }

  const QuantifyConfig& config() const noexcept { return cfg_; }
  const std::vector<Category>& categories() const noexcept { return cfg_.categories; }
  std::size_t size() const noexcept { return subsets_.size(); }
  std::size_t vocab_size() const noexcept { return vocab_size_; }
  const std::vector<std::uint32_t>& subset(std::size_t s) const { return subsets_[s]; }
  const ProfileMatrix& matrix(std::size_t s) const { return matrices_[s]; }

  /// Profile restricted to subset s.
  ProfileKey key(const TokenProfile& p, std::size_t s) const {
    ProfileKey k = 0;
    const auto& sub = subsets_[s];
    for (std::size_t b = 0; b < sub.size(); ++b)
      if (std::binary_search(p.begin(), p.end(), sub[b])) k |= ProfileKey{1} << b;
    return k;
  }

  Encoded encode(std::span<const TokenProfile> test, unsigned threads = 1) const {
    if (test.empty()) throw EstimationError("empty test corpus");
    const std::size_t s_count = subsets_.size();
    const auto k = static_cast<Eigen::Index>(cfg_.categories.size());
    const bool stacked = cfg_.pooling == EnsemblePooling::Stacked;
    Encoded enc;
    enc.n_docs = test.size();
    if (stacked) enc.contrib = Eigen::MatrixXd::Zero(k, static_cast<Eigen::Index>(test.size()));
    else enc.rows.assign(test.size() * s_count, kNoRow);
    constexpr std::size_t kChunk = 4096;
    const std::size_t n_chunks = (test.size() + kChunk - 1) / kChunk;
    parallel_for(n_chunks, threads, [&](std::size_t chunk) {
      std::vector<ProfileKey> keys(s_count);
      const std::size_t end = std::min(test.size(), (chunk + 1) * kChunk);
      for (std::size_t d = chunk * kChunk; d < end; ++d) {
        std::fill(keys.begin(), keys.end(), ProfileKey{0});
        for (std::uint32_t w : test[d]) {
          if (w >= vocab_size_) continue;
          for (std::uint32_t m = member_off_[w]; m < member_off_[w + 1]; ++m)
            keys[member_subset_[m]] |= ProfileKey{1} << member_bit_[m];
        }
        for (std::size_t s = 0; s < s_count; ++s) {
          auto r = matrices_[s].row_of(keys[s]);
          if (stacked) {
            if (r) enc.contrib.col(static_cast<Eigen::Index>(d)) += matrices_[s].matrix().row(static_cast<Eigen::Index>(*r)).transpose();
          } else {
            enc.rows[d * s_count + s] = r ? static_cast<std::uint32_t>(*r) : kNoRow;
          }
        }
      }
    });
    return enc;
  }

  /// Estimate from an encoded corpus with per-document weights (bootstrap
  /// multiplicities); empty weights means all ones.
  EnsembleResult estimate(const Encoded& enc, std::span<const double> weights = {}) const {
    if (!weights.empty() && weights.size() != enc.n_docs) throw EstimationError("weights size mismatch");
    double wsum = weights.empty() ? static_cast<double>(enc.n_docs) : 0.0;
    for (double w : weights) wsum += w;
    if (!(wsum > 0.0)) throw EstimationError("empty test corpus");
    const auto k = static_cast<Eigen::Index>(cfg_.categories.size());
    EnsembleResult out;
    if (cfg_.pooling == EnsemblePooling::Stacked) {
      Eigen::VectorXd h = Eigen::VectorXd::Zero(k);
      if (weights.empty()) {
        h = enc.contrib.rowwise().sum();
      } else {
        for (std::size_t d = 0; d < enc.n_docs; ++d)
          if (weights[d] != 0.0) h += weights[d] * enc.contrib.col(static_cast<Eigen::Index>(d));
      }
      h /= wsum;
      SimplexSolution sol = minimize_on_simplex(gram_total_, h);
      out.distribution = to_distribution(cfg_.categories, sol.beta);
      out.identified = sol.identified;
      return out;
    }
    const std::size_t s_count = subsets_.size();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(k);
    for (std::size_t s = 0; s < s_count; ++s) {
      const auto& pm = matrices_[s];
      Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pm.rows()));
      for (std::size_t d = 0; d < enc.n_docs; ++d) {
        std::uint32_t r = enc.rows[d * s_count + s];
        if (r != kNoRow) y(r) += weights.empty() ? 1.0 : weights[d];
      }
      y /= wsum;
      SimplexSolution sol = minimize_on_simplex(grams_[s], pm.matrix().transpose() * y);
      if (!sol.identified) ++out.non_identified_subsets;
      acc += sol.beta;
    }
    acc /= acc.sum();
    out.distribution = to_distribution(cfg_.categories, acc);
    out.identified = out.non_identified_subsets < s_count;
    return out;
  }

  EnsembleResult estimate(std::span<const TokenProfile> test, unsigned threads = 1) const {
    return estimate(encode(test, threads));
  }

 private:
  void build_membership() {
    std::vector<std::uint32_t> count(vocab_size_ + 1, 0);
    for (const auto& sub : subsets_)
      for (std::uint32_t w : sub) ++count[w + 1];
    member_off_.assign(vocab_size_ + 1, 0);
    for (std::size_t w = 0; w < vocab_size_; ++w) member_off_[w + 1] = member_off_[w] + count[w + 1];
    member_subset_.resize(member_off_.back());
    member_bit_.resize(member_off_.back());
    std::vector<std::uint32_t> fill(member_off_.begin(), member_off_.end() - 1);
    for (std::size_t s = 0; s < subsets_.size(); ++s)
      for (std::size_t b = 0; b < subsets_[s].size(); ++b) {
        std::uint32_t w = subsets_[s][b];
        member_subset_[fill[w]] = static_cast<std::uint32_t>(s);
        member_bit_[fill[w]] = static_cast<std::uint8_t>(b);
        ++fill[w];
      }
  }

  QuantifyConfig cfg_;
  std::size_t vocab_size_ = 0;
  std::vector<std::vector<std::uint32_t>> subsets_;
  std::vector<ProfileMatrix> matrices_;
  std::vector<Eigen::MatrixXd> grams_;
  Eigen::MatrixXd gram_total_;
  // word -> (subset, bit) memberships, CSR layout
  std::vector<std::uint32_t> member_off_;
  std::vector<std::uint32_t> member_subset_;
  std::vector<std::uint8_t> member_bit_;
};

/// Random-subspace ensemble estimate of the test corpus's category mix.
inline EnsembleResult quantify_ensemble(std::span<const TokenProfile> test, const LabeledProfiles& train,
                                       const QuantifyConfig& cfg, unsigned threads = 1) {
  return FittedEnsemble(train, cfg, threads).estimate(test, threads);
}

}  // namespace aggsent
