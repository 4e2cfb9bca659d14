#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "aggsent/quantifier/ensemble.hpp"
#include "aggsent/util/parallel.hpp"
#include "aggsent/util/random.hpp"
#include "aggsent/util/stats.hpp"

namespace aggsent {

struct Interval {
  Category category;
  double estimate = 0.0;
  double low = 0.0;
  double high = 0.0;
};

struct BootstrapOptions {
  std::size_t reps = 200;
  double level = 0.95;
  std::uint64_t seed = 1;
  /// Also resample the training set and refit per replicate.
  bool resample_training = false;
};

/// Percentile intervals from resampling test documents with replacement.
/// Each interval is widened, if needed, to contain the point estimate.
inline std::vector<Interval> bootstrap_ci(std::span<const TokenProfile> test, const LabeledProfiles& train,
                                          const FittedEnsemble& fitted, const BootstrapOptions& opt,
                                          unsigned threads = 1) {
  if (opt.reps < 2) throw ConfigError("bootstrap needs at least 2 replicates");
  if (!(opt.level > 0.0 && opt.level < 1.0)) throw ConfigError("confidence level must be in (0,1)");
  const auto enc = fitted.encode(test, threads);
  const EnsembleResult point = fitted.estimate(enc);
  const std::size_t k = fitted.categories().size();
  const std::size_t n = enc.n_docs;
  std::vector<std::vector<double>> draws(k, std::vector<double>(opt.reps));

  parallel_for(opt.reps, threads, [&](std::size_t b) {
    Rng rng = Rng::substream(opt.seed, {0xb0075ULL, b});
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[rng.below(n)] += 1.0;
    EnsembleResult r;
    if (opt.resample_training) {
      LabeledProfiles boot;
      boot.vocab_size = train.vocab_size;
      const std::size_t m = train.profiles.size();
      for (int attempt = 0;; ++attempt) {
        boot.profiles.clear();
        boot.labels.clear();
        for (std::size_t i = 0; i < m; ++i) {
          auto j = rng.below(m);
          boot.profiles.push_back(train.profiles[j]);
          boot.labels.push_back(train.labels[j]);
        }
        auto present = boot.categories_present();
        bool ok = std::all_of(fitted.categories().begin(), fitted.categories().end(), [&](Category c) {
          return std::find(present.begin(), present.end(), c) != present.end();
        });
        if (ok) break;
        if (attempt == 20) throw EstimationError("bootstrap: a category vanished from every training resample");
      }
      QuantifyConfig cfg = fitted.config();
      FittedEnsemble refit(boot, cfg);
      r = refit.estimate(refit.encode(test), w);
    } else {
      r = fitted.estimate(enc, w);
    }
    for (std::size_t c = 0; c < k; ++c) draws[c][b] = r.distribution.probs()[c];
  });

  const double a = (1.0 - opt.level) / 2.0;
  std::vector<Interval> out;
  for (std::size_t c = 0; c < k; ++c) {
    Interval iv;
    iv.category = fitted.categories()[c];
    iv.estimate = point.distribution.probs()[c];
    iv.low = std::min(iv.estimate, empirical_quantile(draws[c], a));
    iv.high = std::max(iv.estimate, empirical_quantile(draws[c], 1.0 - a));
    out.push_back(iv);
  }
  return out;
}

}  // namespace aggsent
