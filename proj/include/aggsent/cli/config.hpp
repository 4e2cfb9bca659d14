#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aggsent/category.hpp"
#include "aggsent/error.hpp"
#include "aggsent/pipeline.hpp"
#include "aggsent/util/csv.hpp"

namespace aggsent::cli {

/// Settings read from a `key = value` file ('#' starts a comment).
struct RunSettings {
  PipelineConfig pipeline{};
  double lowess_frac = 0.25;
  double ci_level = 0.95;
  bool resample_training = false;

  /// Canonical key=value listing; feeds the output config hash.
  std::string canonical() const {
    const auto& q = pipeline.quant;
    std::ostringstream os;
    os << "n_subsets=" << q.n_subsets << ";words_per_subset=" << q.words_per_subset
       << ";bootstrap_reps=" << q.bootstrap_reps << ";alpha=" << q.conditional.alpha
       << ";pool_unseen=" << q.conditional.pool_unseen
       << ";pooling=" << (q.pooling == EnsemblePooling::Stacked ? "stacked" : "mean") << ";debias=" << q.debias
       << ";categories=";
    for (Category c : q.categories) os << to_string(c) << ',';
    os << ";vocab_min_count=" << pipeline.vocab_min_count << ";vocab_max_size=" << pipeline.vocab_max_size
       << ";strip_urls=" << pipeline.norm.strip_urls << ";strip_mentions=" << pipeline.norm.strip_mentions
       << ";strip_hashtag_marks=" << pipeline.norm.strip_hashtag_marks
       << ";arabic_folding=" << pipeline.norm.arabic_folding << ";lowess_frac=" << lowess_frac
       << ";ci_level=" << ci_level << ";resample_training=" << resample_training;
    return os.str();
  }
};

namespace detail {

inline std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && sp(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && sp(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

inline bool parse_bool(const std::string& v, const std::string& src, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError(src, line, "expected a boolean, got '" + v + "'");
}

inline std::size_t parse_count(const std::string& v, const std::string& src, std::size_t line) {
  const auto x = csv::to_int(v, src, line);
  if (x < 0) throw ParseError(src, line, "expected a nonnegative integer, got '" + v + "'");
  return static_cast<std::size_t>(x);
}

}  // namespace detail

inline void apply_setting(RunSettings& s, const std::string& key, const std::string& value, const std::string& src,
                          std::size_t line) {
  auto& q = s.pipeline.quant;
  auto& n = s.pipeline.norm;
  if (key == "n_subsets") q.n_subsets = detail::parse_count(value, src, line);
  else if (key == "words_per_subset") q.words_per_subset = detail::parse_count(value, src, line);
  else if (key == "bootstrap_reps") q.bootstrap_reps = detail::parse_count(value, src, line);
  else if (key == "alpha") q.conditional.alpha = csv::to_double(value, src, line);
  else if (key == "pool_unseen") q.conditional.pool_unseen = detail::parse_bool(value, src, line);
  else if (key == "debias") q.debias = detail::parse_bool(value, src, line);
  else if (key == "pooling") {
    if (value == "stacked") q.pooling = EnsemblePooling::Stacked;
    else if (value == "mean") q.pooling = EnsemblePooling::Mean;
    else throw ParseError(src, line, "pooling must be 'stacked' or 'mean'");
  } else if (key == "categories") {
    q.categories.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto c = parse_category(detail::trim(item));
      if (!c) throw ParseError(src, line, "unknown category '" + item + "'");
      q.categories.push_back(*c);
    }
  } else if (key == "vocab_min_count") s.pipeline.vocab_min_count = detail::parse_count(value, src, line);
  else if (key == "vocab_max_size") s.pipeline.vocab_max_size = detail::parse_count(value, src, line);
  else if (key == "strip_urls") n.strip_urls = detail::parse_bool(value, src, line);
  else if (key == "strip_mentions") n.strip_mentions = detail::parse_bool(value, src, line);
  else if (key == "strip_hashtag_marks") n.strip_hashtag_marks = detail::parse_bool(value, src, line);
  else if (key == "arabic_folding") n.arabic_folding = detail::parse_bool(value, src, line);
  else if (key == "lowess_frac") s.lowess_frac = csv::to_double(value, src, line);
  else if (key == "ci_level") s.ci_level = csv::to_double(value, src, line);
  else if (key == "resample_training") s.resample_training = detail::parse_bool(value, src, line);
  else if (key == "seed" || key == "rng_seed") throw ParseError(src, line, "the seed is set only by --seed");
  else throw ParseError(src, line, "unknown key '" + key + "'");
}

inline RunSettings read_settings(std::istream& in, const std::string& src) {
  RunSettings s;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string t = detail::trim(raw);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(src, line, "expected key = value");
    const std::string key = detail::trim(t.substr(0, eq)), value = detail::trim(t.substr(eq + 1));
    if (key.empty()) throw ParseError(src, line, "empty key");
    apply_setting(s, key, value, src, line);
  }
  return s;
}

}  // namespace aggsent::cli
