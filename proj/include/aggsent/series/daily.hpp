#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aggsent/corpus/document.hpp"
#include "aggsent/error.hpp"
#include "aggsent/pipeline.hpp"
#include "aggsent/quantifier/sentiment.hpp"
#include "aggsent/series/smooth.hpp"
#include "aggsent/util/date.hpp"
#include "aggsent/util/parallel.hpp"
#include "aggsent/util/stats.hpp"

namespace aggsent {

struct DailySeriesRow {
  Day date;
  std::size_t n_tweets = 0;
  double sentiment = 0.0;
  double sentiment_deviation = 0.0;
  double attention_deviation = 0.0;
  CategoryDistribution distribution;
};

struct SkippedDay {
  Day date;
  std::size_t n_tweets = 0;
  std::string reason;
};

struct DailySeries {
  std::vector<DailySeriesRow> rows;  // strictly increasing dates
  std::vector<SkippedDay> skipped;   // empty days and days whose quantification failed
  std::size_t outside_window = 0;    // documents dropped for falling outside the window

  std::vector<double> sentiments() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.sentiment);
    return v;
  }
  std::vector<double> volumes() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(static_cast<double>(r.n_tweets));
    return v;
  }
  std::vector<double> day_serials() const {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(static_cast<double>(r.date.serial()));
    return v;
  }
};

/// Recompute both deviation columns as differences from the means over the
/// retained rows.
inline void compute_deviations(std::vector<DailySeriesRow>& rows) {
  if (rows.empty()) return;
  double s = 0.0, a = 0.0;
  for (const auto& r : rows) {
    s += r.sentiment;
    a += static_cast<double>(r.n_tweets);
  }
  s /= static_cast<double>(rows.size());
  a /= static_cast<double>(rows.size());
  for (auto& r : rows) {
    r.sentiment_deviation = r.sentiment - s;
    r.attention_deviation = static_cast<double>(r.n_tweets) - a;
  }
}

/// One quantification per UTC day in the window. Documents are ordered by id
/// within each day, so the result does not depend on stream order.
inline DailySeries daily_aggregate(std::span<const Document> stream, const Pipeline& pipeline, DayWindow window,
                                   unsigned threads = 1) {
  if (window.last < window.first) throw ConfigError("empty date window");
  DailySeries out;
  std::map<Day, std::vector<const Document*>> by_day;
  for (const auto& d : stream) {
    const Day day = d.day();
    if (!window.contains(day)) {
      ++out.outside_window;
      continue;
    }
    by_day[day].push_back(&d);
  }
  std::vector<Day> days;
  for (auto& [day, docs] : by_day) {
    std::sort(docs.begin(), docs.end(), [](const Document* a, const Document* b) { return a->id < b->id; });
    days.push_back(day);
  }

  std::vector<std::optional<DailySeriesRow>> rows(days.size());
  std::vector<std::string> errors(days.size());
  parallel_for(days.size(), threads, [&](std::size_t i) {
    const auto& docs = by_day.at(days[i]);
    try {
      auto prof = pipeline.profiles(std::span<const Document* const>(docs));
      auto res = pipeline.quantify(prof);
      DailySeriesRow r;
      r.date = days[i];
      r.n_tweets = docs.size();
      r.sentiment = sentiment_ratio(res.distribution);
      r.distribution = std::move(res.distribution);
      rows[i] = std::move(r);
    } catch (const Error& e) {
      errors[i] = std::string(e.kind()) + ": " + e.what();
    }
  });

  std::size_t k = 0;
  for (Day d = window.first; d <= window.last; d = d + 1) {
    if (k < days.size() && days[k] == d) {
      if (rows[k])
        out.rows.push_back(std::move(*rows[k]));
      else
        out.skipped.push_back({d, by_day.at(d).size(), errors[k]});
      ++k;
    } else {
      out.skipped.push_back({d, 0, "no documents"});
    }
  }
  compute_deviations(out.rows);
  return out;
}

inline DailySeries daily_aggregate(std::span<const Document> stream, const TrainingSet& train,
                                   const PipelineConfig& cfg, DayWindow window, unsigned threads = 1) {
  Pipeline p(train, cfg, threads);
  return daily_aggregate(stream, p, window, threads);
}

/// Sum(sentiment * n_tweets) / Sum(n_tweets).
inline double weighted_mean_sentiment(std::span<const DailySeriesRow> rows) {
  double num = 0.0, den = 0.0;
  for (const auto& r : rows) {
    num += r.sentiment * static_cast<double>(r.n_tweets);
    den += static_cast<double>(r.n_tweets);
  }
  if (!(den > 0.0)) throw EstimationError("weighted mean: no rows with tweets");
  return num / den;
}

inline double mean_sentiment(std::span<const DailySeriesRow> rows) {
  if (rows.empty()) throw EstimationError("mean sentiment: no rows");
  double s = 0.0;
  for (const auto& r : rows) s += r.sentiment;
  return s / static_cast<double>(rows.size());
}

/// Daily volume at the given percentile (0..100) of the retained rows.
inline double volume_threshold(std::span<const DailySeriesRow> rows, double percentile) {
  if (!(percentile >= 0.0 && percentile <= 100.0)) throw ConfigError("percentile must be in [0,100]");
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(static_cast<double>(r.n_tweets));
  return empirical_quantile(std::move(v), percentile / 100.0);
}

/// Mean sentiment over days with n_tweets strictly above the threshold.
inline double conditioned_mean(std::span<const DailySeriesRow> rows, double volume_threshold) {
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows)
    if (static_cast<double>(r.n_tweets) > volume_threshold) {
      s += r.sentiment;
      ++n;
    }
  if (n == 0) throw EstimationError("conditioned mean: no day above the volume threshold");
  return s / static_cast<double>(n);
}

}  // namespace aggsent
