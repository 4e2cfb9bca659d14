#pragma once

#include <cmath>
#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aggsent/econometrics/negbin.hpp"
#include "aggsent/econometrics/predict.hpp"
#include "aggsent/error.hpp"
#include "aggsent/util/csv.hpp"

namespace aggsent {

struct CountryPanelRow {
  std::string country;
  double sentiment = 0.0;
  double foreign_fighters = 0.0;
  std::optional<double> foreign_fighters_alt;  // later count source
  double active_terror_group = 0.0;
  double borders_isis = 0.0;
  double pct_shia = 0.0;
  double democracy = 0.0;
  double pct_broadband = 0.0;
  double pct_muslim = 0.0;
  std::optional<double> justify_attacks;
  std::optional<double> n_tweets;
  std::map<std::string, double> extra;  // any other numeric column, by name
};

/// Panel CSV. Required: country, sentiment, foreign_fighters,
/// active_terror_group, borders_isis, pct_shia, democracy, pct_broadband,
/// pct_muslim. Optional: foreign_fighters_alt, justify_attacks, n_tweets.
/// Empty optional cells mean missing. Other numeric columns are kept in
/// `extra`.
inline std::vector<CountryPanelRow> read_country_panel(std::istream& in, const std::string& source) {
  auto t = csv::read_table(in, source);
  const auto ci = t.require("country");
  const std::vector<std::string> required{"sentiment", "foreign_fighters", "active_terror_group", "borders_isis",
                                          "pct_shia",  "democracy",        "pct_broadband",       "pct_muslim"};
  for (const auto& r : required) t.require(r);
  std::vector<CountryPanelRow> rows;
  for (const auto& rec : t.rows) {
    CountryPanelRow row;
    row.country = rec.fields[ci];
    if (row.country.empty()) throw ParseError(source, rec.line, "empty country");
    auto num = [&](std::size_t j) { return csv::to_double(rec.fields[j], source, rec.line); };
    auto opt = [&](const char* name) -> std::optional<double> {
      auto j = t.find(name);
      if (!j || rec.fields[*j].empty()) return std::nullopt;
      return num(*j);
    };
    row.sentiment = num(t.require("sentiment"));
    row.foreign_fighters = num(t.require("foreign_fighters"));
    row.active_terror_group = num(t.require("active_terror_group"));
    row.borders_isis = num(t.require("borders_isis"));
    row.pct_shia = num(t.require("pct_shia"));
    row.democracy = num(t.require("democracy"));
    row.pct_broadband = num(t.require("pct_broadband"));
    row.pct_muslim = num(t.require("pct_muslim"));
    row.foreign_fighters_alt = opt("foreign_fighters_alt");
    row.justify_attacks = opt("justify_attacks");
    row.n_tweets = opt("n_tweets");
    for (std::size_t j = 0; j < t.header.size(); ++j) {
      const auto& h = t.header[j];
      if (j == ci || std::find(required.begin(), required.end(), h) != required.end() ||
          h == "foreign_fighters_alt" || h == "justify_attacks" || h == "n_tweets" || rec.fields[j].empty())
        continue;
      double v = 0.0;
      auto [p, ec] = std::from_chars(rec.fields[j].data(), rec.fields[j].data() + rec.fields[j].size(), v);
      if (ec == std::errc{} && p == rec.fields[j].data() + rec.fields[j].size()) row.extra[h] = v;
    }
    if (!(row.sentiment >= 0.0 && row.sentiment <= 1.0)) throw ParseError(source, rec.line, "sentiment outside [0,1]");
    if (!(row.pct_muslim > 0.0 && row.pct_muslim <= 100.0))
      throw ParseError(source, rec.line, "pct_muslim must be in (0,100]");
    for (double v : {row.pct_shia, row.pct_broadband})
      if (!(v >= 0.0 && v <= 100.0)) throw ParseError(source, rec.line, "percentage outside [0,100]");
    if (row.foreign_fighters < 0.0 || row.foreign_fighters != std::floor(row.foreign_fighters))
      throw ParseError(source, rec.line, "foreign_fighters must be a nonnegative integer");
    rows.push_back(std::move(row));
  }
  return rows;
}

struct CountryModelOptions {
  int model = 1;                                // 1..5
  std::string exposure_col = "pct_muslim";
  std::string alt_count_col = "foreign_fighters_alt";
  double min_volume = 15000.0;                  // model 2
  bool drop_us = false;                         // implied by model 3
};

struct CountryModelData {
  std::vector<std::string> countries;
  std::vector<double> counts;
  std::vector<double> exposure;
  std::vector<std::string> names;
  Eigen::MatrixXd X;
};

inline double panel_value(const CountryPanelRow& r, const std::string& col) {
  if (col == "pct_muslim") return r.pct_muslim;
  if (col == "sentiment") return r.sentiment;
  if (col == "foreign_fighters") return r.foreign_fighters;
  if (col == "pct_shia") return r.pct_shia;
  if (col == "pct_broadband") return r.pct_broadband;
  if (col == "democracy") return r.democracy;
  if (col == "foreign_fighters_alt" && r.foreign_fighters_alt) return *r.foreign_fighters_alt;
  if (col == "n_tweets" && r.n_tweets) return *r.n_tweets;
  if (col == "justify_attacks" && r.justify_attacks) return *r.justify_attacks;
  if (auto it = r.extra.find(col); it != r.extra.end()) return it->second;
  throw InputError(r.country + ": no value for column '" + col + "'");
}

/// Sample and covariates for the five country models:
///   1  all countries
///   2  countries with at least `min_volume` tweets
///   3  United States dropped
///   4  alternate foreign-fighter counts as outcome
///   5  justify_attacks as the only covariate, countries with survey data
inline CountryModelData country_model_data(const std::vector<CountryPanelRow>& panel, const CountryModelOptions& opt) {
  if (opt.model < 1 || opt.model > 5) throw ConfigError("model must be 1..5");
  CountryModelData d;
  if (opt.model == 5)
    d.names = {"justify_attacks", kConstName};
  else
    d.names = {"sentiment", "active_terror_group", "borders_isis", "pct_shia", "democracy", "pct_broadband", kConstName};
  const bool drop_us = opt.drop_us || opt.model == 3;
  std::vector<std::vector<double>> xs;
  for (const auto& r : panel) {
    if (drop_us && r.country == "US") continue;
    if (opt.model == 2) {
      if (!r.n_tweets) throw InputError("model 2 needs an n_tweets column (missing for " + r.country + ")");
      if (*r.n_tweets < opt.min_volume) continue;
    }
    if (opt.model == 5 && !r.justify_attacks) continue;
    double y;
    if (opt.model == 4) {
      if (opt.alt_count_col == "foreign_fighters_alt" && !r.foreign_fighters_alt) continue;
      y = panel_value(r, opt.alt_count_col);
      if (y < 0.0 || y != std::floor(y)) throw InputError(r.country + ": alternate count is not a nonnegative integer");
    } else {
      y = r.foreign_fighters;
    }
    std::vector<double> x;
    if (opt.model == 5)
      x = {*r.justify_attacks, 1.0};
    else
      x = {r.sentiment, r.active_terror_group, r.borders_isis, r.pct_shia, r.democracy, r.pct_broadband, 1.0};
    const double e = panel_value(r, opt.exposure_col);
    if (!(e > 0.0)) throw InputError(r.country + ": exposure must be positive");
    d.countries.push_back(r.country);
    d.counts.push_back(y);
    d.exposure.push_back(e);
    xs.push_back(std::move(x));
  }
  if (xs.empty()) throw EstimationError("country model: no rows left after filtering");
  d.X.resize(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(d.names.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < d.names.size(); ++j)
      d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = xs[i][j];
  return d;
}

inline RegressionFit fit_country_model(const std::vector<CountryPanelRow>& panel, const CountryModelOptions& opt,
                                       const NegBinOptions& nb = {}) {
  auto d = country_model_data(panel, opt);
  return negbin_fit(d.counts, d.X, d.exposure, d.names, nb);
}

}  // namespace aggsent
