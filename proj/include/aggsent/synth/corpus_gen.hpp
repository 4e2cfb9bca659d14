#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "aggsent/category.hpp"
#include "aggsent/corpus/document.hpp"
#include "aggsent/synth/language_model.hpp"
#include "aggsent/util/random.hpp"

namespace aggsent::synth {

struct DocLength {
  double mean = 12.0;         // of the untruncated geometric
  std::size_t max = 40;
};

/// Draws synthetic documents from a language model. Each document has its
/// own random substream keyed by (stream tag, index), so generation order
/// and parallelism do not affect the output.
class DocumentSampler {
 public:
  DocumentSampler(const LanguageModel& lm, DocLength len) : lm_(lm), len_(len) {
    lm.validate();
    if (!(len.mean >= 1.0) || len.max < 1) throw ConfigError("document length: mean must be >= 1 and max >= 1");
    for (const auto& p : lm.token_probs) samplers_.emplace_back(p);
  }

  std::size_t category_index(Category c) const {
    for (std::size_t i = 0; i < lm_.categories.size(); ++i)
      if (lm_.categories[i] == c) return i;
    throw ConfigError("category " + std::string(to_string(c)) + " not in language model");
  }

  /// Space-separated tokens for one document of category index `c`.
  std::string text(std::size_t c, Rng& rng) const {
    const auto n = std::min<std::uint64_t>(rng.geometric(1.0 / len_.mean), len_.max);
    std::string s;
    for (std::uint64_t i = 0; i < n; ++i) {
      if (i) s.push_back(' ');
      s += token_name(samplers_[c](rng));
    }
    return s;
  }

  const LanguageModel& model() const noexcept { return lm_; }

 private:
  const LanguageModel& lm_;
  DocLength len_;
  std::vector<DiscreteSampler> samplers_;
};

inline void check_priors(const std::vector<double>& p, std::size_t k, const char* what) {
  if (p.size() != k) throw ConfigError(std::string(what) + ": one prior per category required");
  double s = 0.0;
  for (double x : p) {
    if (x < 0.0) throw ConfigError(std::string(what) + ": negative prior");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-9) throw ConfigError(std::string(what) + ": priors do not sum to 1");
}

struct GeneratorSpec {
  LanguageModel language;
  std::vector<double> train_priors;
  std::vector<double> test_priors;
  std::size_t n_train = 1600;
  std::size_t n_test = 10000;
  DocLength length{};
  std::uint64_t seed = 1;
};

struct SyntheticCorpus {
  TrainingSet train;
  std::vector<Document> test;
  std::vector<Category> test_labels;
  CategoryDistribution truth;  // realized test label shares
};

/// Training and test documents from the same conditionals with their own
/// category mixes. Truth is the realized test label frequency.
inline SyntheticCorpus gen_corpus(const GeneratorSpec& spec) {
  const auto& lm = spec.language;
  lm.validate();
  const std::size_t k = lm.categories.size();
  check_priors(spec.train_priors, k, "train_priors");
  check_priors(spec.test_priors, k, "test_priors");
  DocumentSampler sampler(lm, spec.length);
  DiscreteSampler train_mix(spec.train_priors), test_mix(spec.test_priors);
  const UtcTime t0{Day(2014, 7, 1).sys()};

  SyntheticCorpus out;
  out.train.items.reserve(spec.n_train);
  for (std::size_t i = 0; i < spec.n_train; ++i) {
    Rng rng = Rng::substream(spec.seed, {1, i});
    std::size_t c = train_mix(rng);
    Document d;
    d.id = "train-" + std::to_string(i);
    d.timestamp = t0;
    d.text = sampler.text(c, rng);
    out.train.items.push_back({std::move(d), lm.categories[c]});
  }
  std::vector<double> counts(k, 0.0);
  out.test.reserve(spec.n_test);
  out.test_labels.reserve(spec.n_test);
  for (std::size_t i = 0; i < spec.n_test; ++i) {
    Rng rng = Rng::substream(spec.seed, {2, i});
    std::size_t c = test_mix(rng);
    Document d;
    d.id = "test-" + std::to_string(i);
    d.timestamp = t0;
    d.text = sampler.text(c, rng);
    out.test.push_back(std::move(d));
    out.test_labels.push_back(lm.categories[c]);
    counts[c] += 1.0;
  }
  if (spec.n_test > 0) {
    for (double& x : counts) x /= static_cast<double>(spec.n_test);
    out.truth = CategoryDistribution(lm.categories, counts);
  }
  return out;
}

}  // namespace aggsent::synth
