#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aggsent/corpus/document.hpp"
#include "aggsent/corpus/tokenize.hpp"
#include "aggsent/corpus/training.hpp"
#include "aggsent/corpus/vocabulary.hpp"
#include "aggsent/quantifier/ensemble.hpp"
#include "aggsent/util/parallel.hpp"

namespace aggsent {

struct PipelineConfig {
  NormConfig norm{};
  std::size_t vocab_min_count = 2;
  std::size_t vocab_max_size = 2000;
  QuantifyConfig quant{};
};

/// Text to profiles to a fitted ensemble: normalization, vocabulary built
/// from the training set, and the quantifier fitted on it.
class Pipeline {
 public:
  Pipeline(const TrainingSet& train, PipelineConfig cfg, unsigned threads = 1) : cfg_(std::move(cfg)) {
    std::vector<std::vector<std::string>> toks(train.size());
    parallel_for(train.size(), threads,
                 [&](std::size_t i) { toks[i] = normalize_tokens(train.items[i].doc.text, cfg_.norm); });
    vocab_ = Vocabulary::build(toks, cfg_.vocab_min_count, cfg_.vocab_max_size);
    train_.vocab_size = vocab_.size();
    train_.profiles.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
      train_.profiles.push_back(profile(toks[i], vocab_));
      train_.labels.push_back(train.items[i].label);
    }
    if (!cfg_.quant.categories.empty()) validate_training_set(train, cfg_.quant.categories);
    ensemble_.emplace(train_, cfg_.quant, threads);
  }

  const PipelineConfig& config() const noexcept { return cfg_; }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const LabeledProfiles& training_profiles() const noexcept { return train_; }
  const FittedEnsemble& ensemble() const noexcept { return *ensemble_; }

  TokenProfile profile_of(const Document& d) const { return profile(normalize_tokens(d.text, cfg_.norm), vocab_); }

  std::vector<TokenProfile> profiles(std::span<const Document> docs, unsigned threads = 1) const {
    std::vector<TokenProfile> out(docs.size());
    parallel_for(docs.size(), threads, [&](std::size_t i) { out[i] = profile_of(docs[i]); });
    return out;
  }

  std::vector<TokenProfile> profiles(std::span<const Document* const> docs, unsigned threads = 1) const {
    std::vector<TokenProfile> out(docs.size());
    parallel_for(docs.size(), threads, [&](std::size_t i) { out[i] = profile_of(*docs[i]); });
    return out;
  }

  EnsembleResult quantify(std::span<const TokenProfile> test, unsigned threads = 1) const {
    return ensemble_->estimate(test, threads);
  }

 private:
  PipelineConfig cfg_;
  Vocabulary vocab_;
  LabeledProfiles train_;
  std::optional<FittedEnsemble> ensemble_;
};

}  // namespace aggsent
