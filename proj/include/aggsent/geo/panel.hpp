#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "aggsent/error.hpp"
#include "aggsent/geo/attribute.hpp"
#include "aggsent/pipeline.hpp"
#include "aggsent/quantifier/sentiment.hpp"
#include "aggsent/util/parallel.hpp"

namespace aggsent {

struct CountryPanelOptions {
  std::size_t min_tweets = 1001;  // countries need at least this many attributed documents
  bool drop_us = false;
};

struct CountrySentiment {
  CountryCode country;
  std::size_t n_tweets = 0;
  double sentiment = 0.0;
  CategoryDistribution distribution;
  bool us_flag = false;
};

struct CountryPanel {
  std::vector<CountrySentiment> rows;  // ordered by country code
  std::size_t n_documents = 0;
  std::size_t n_attributed = 0;
  std::array<std::size_t, 4> tier_counts{};  // indexed by GeoTier
  std::map<CountryCode, std::string> skipped;  // below threshold, dropped, or failed

  double attribution_rate() const {
    return n_documents == 0 ? 0.0 : static_cast<double>(n_attributed) / static_cast<double>(n_documents);
  }
};

/// Attribute every document, then quantify each country with enough
/// documents. Documents are ordered by id within a country.
inline CountryPanel country_panel(std::span<const Document> stream, const Pipeline& pipeline, const Gazetteer& gz,
                                  const TimeZoneTable& tz, const CountryPanelOptions& opt, unsigned threads = 1) {
  if (opt.min_tweets < 1) throw ConfigError("min_tweets must be >= 1");
  CountryPanel out;
  out.n_documents = stream.size();
  std::vector<Attribution> attr(stream.size());
  parallel_for(stream.size(), threads, [&](std::size_t i) { attr[i] = attribute_country(stream[i], gz, tz); });

  std::map<CountryCode, std::vector<const Document*>> by_country;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    ++out.tier_counts[static_cast<std::size_t>(attr[i].tier)];
    if (!attr[i].country) continue;
    ++out.n_attributed;
    by_country[*attr[i].country].push_back(&stream[i]);
  }

  std::vector<CountryCode> keep;
  for (auto& [c, docs] : by_country) {
    if (opt.drop_us && c == "US") {
      out.skipped[c] = "dropped (US)";
    } else if (docs.size() < opt.min_tweets) {
      out.skipped[c] = "below threshold (" + std::to_string(docs.size()) + ")";
    } else {
      std::sort(docs.begin(), docs.end(), [](const Document* a, const Document* b) { return a->id < b->id; });
      keep.push_back(c);
    }
  }

  std::vector<std::optional<CountrySentiment>> rows(keep.size());
  std::vector<std::string> errors(keep.size());
  parallel_for(keep.size(), threads, [&](std::size_t i) {
    const auto& docs = by_country.at(keep[i]);
    try {
      auto res = pipeline.quantify(pipeline.profiles(std::span<const Document* const>(docs)));
      CountrySentiment r;
      r.country = keep[i];
      r.n_tweets = docs.size();
      r.sentiment = sentiment_ratio(res.distribution);
      r.distribution = std::move(res.distribution);
      r.us_flag = keep[i] == "US";
      rows[i] = std::move(r);
    } catch (const Error& e) {
      errors[i] = std::string(e.kind()) + ": " + e.what();
    }
  });
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (rows[i])
      out.rows.push_back(std::move(*rows[i]));
    else
      out.skipped[keep[i]] = errors[i];
  }
  if (out.rows.empty()) throw EstimationError("no country passes the min_tweets threshold");
  return out;
}

}  // namespace aggsent
