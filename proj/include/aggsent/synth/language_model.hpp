#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "aggsent/category.hpp"
#include "aggsent/error.hpp"
#include "aggsent/util/random.hpp"

namespace aggsent::synth {

/// Per-category token distributions over a shared synthetic vocabulary
/// `w0 .. w{V-1}`. The same distributions generate training and test
/// documents, so only the category mix can differ between the two.
struct LanguageModel {
  std::vector<Category> categories;
  std::vector<std::vector<double>> token_probs;  // [category][token], each sums to 1

  std::size_t vocab_size() const { return token_probs.empty() ? 0 : token_probs.front().size(); }

  void validate() const {
    if (categories.empty() || categories.size() != token_probs.size())
      throw ConfigError("language model: categories and distributions differ in count");
    const std::size_t v = vocab_size();
    for (std::size_t c = 0; c < token_probs.size(); ++c) {
      const auto& p = token_probs[c];
      if (p.size() != v) throw ConfigError("language model: ragged vocabulary");
      double s = 0.0;
      for (double x : p) {
        if (x < 0.0) throw ConfigError("language model: negative probability");
        s += x;
      }
      if (s == 0.0)
        throw ConfigError("language model: category " + std::string(to_string(categories[c])) + " has zero mass");
      if (std::abs(s - 1.0) > 1e-9) throw ConfigError("language model: distribution does not sum to 1");
    }
  }
};

inline std::string token_name(std::size_t i) { return "w" + std::to_string(i); }

struct MarkerModelSpec {
  std::vector<Category> categories{Category::Positive, Category::Negative, Category::Neutral};
  std::size_t vocab_size = 300;
  std::size_t markers_per_category = 30;  // words whose rate is boosted in one category
  double boost = 20.0;
  double zipf_exponent = 0.8;
  std::uint64_t seed = 1;
};

/// Zipf background shared by every category; each category multiplies the
/// rate of its own randomly chosen marker words by `boost`.
inline LanguageModel make_marker_model(const MarkerModelSpec& spec) {
  if (spec.vocab_size == 0 || spec.markers_per_category > spec.vocab_size)
    throw ConfigError("marker model: markers_per_category exceeds vocabulary");
  LanguageModel lm;
  lm.categories = spec.categories;
  for (std::size_t c = 0; c < spec.categories.size(); ++c) {
    Rng rng = Rng::substream(spec.seed, {0x1a6ULL, c});
    std::vector<double> w(spec.vocab_size);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / std::pow(static_cast<double>(i + 1), spec.zipf_exponent);
    for (std::uint32_t m : sample_without_replacement(static_cast<std::uint32_t>(spec.vocab_size),
                                                      static_cast<std::uint32_t>(spec.markers_per_category), rng))
      w[m] *= spec.boost;
    double s = 0.0;
    for (double x : w) s += x;
    for (double& x : w) x /= s;
    lm.token_probs.push_back(std::move(w));
  }
  return lm;
}

}  // namespace aggsent::synth
