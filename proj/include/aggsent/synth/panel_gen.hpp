#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "aggsent/econometrics/country_model.hpp"
#include "aggsent/util/random.hpp"

namespace aggsent::synth {

struct PanelSpec {
  std::size_t n_countries = 60;
  double alpha = 0.5;
  // Coefficients on sentiment, active_terror_group, borders_isis, pct_shia,
  // democracy, pct_broadband, const.
  std::vector<double> beta{-8.451, 1.224, 1.299, -0.0741, -0.0694, 0.129, 2.610};
  std::uint64_t seed = 1;
};

/// Country panel with NB2 foreign-fighter counts drawn from `beta` and
/// exposure pct_muslim. Country codes are "C0".."Cn"; the last row is "US".
inline std::vector<CountryPanelRow> gen_country_panel(const PanelSpec& spec) {
  if (spec.beta.size() != 7) throw ConfigError("panel generator needs 7 coefficients");
  std::vector<CountryPanelRow> rows;
  for (std::size_t i = 0; i < spec.n_countries; ++i) {
    Rng rng = Rng::substream(spec.seed, {0x9a7e1, i});
    CountryPanelRow r;
    r.country = i + 1 == spec.n_countries ? "US" : "C" + std::to_string(i);
    r.sentiment = 0.05 + 0.35 * rng.uniform();
    r.active_terror_group = rng.uniform() < 0.4 ? 1.0 : 0.0;
    r.borders_isis = rng.uniform() < 0.15 ? 1.0 : 0.0;
    r.pct_shia = 40.0 * rng.uniform();
    r.democracy = -10.0 + 20.0 * rng.uniform();
    r.pct_broadband = 40.0 * rng.uniform();
    r.pct_muslim = 1.0 + 98.0 * rng.uniform();
    r.justify_attacks = 5.0 + 30.0 * rng.uniform();
    r.n_tweets = std::floor(2000.0 + 60000.0 * rng.uniform());
    const double eta = spec.beta[0] * r.sentiment + spec.beta[1] * r.active_terror_group +
                       spec.beta[2] * r.borders_isis + spec.beta[3] * r.pct_shia + spec.beta[4] * r.democracy +
                       spec.beta[5] * r.pct_broadband + spec.beta[6];
    const double mu = r.pct_muslim * std::exp(eta);
    r.foreign_fighters = static_cast<double>(rng.negbin(mu, spec.alpha));
    r.foreign_fighters_alt = static_cast<double>(rng.negbin(mu, spec.alpha));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void write_country_panel(std::ostream& os, const std::vector<CountryPanelRow>& rows) {
  os << "country,sentiment,foreign_fighters,foreign_fighters_alt,active_terror_group,borders_isis,pct_shia,democracy,"
        "pct_broadband,pct_muslim,justify_attacks,n_tweets\n";
  auto opt = [](const std::optional<double>& v) { return v ? csv::fmt(*v) : std::string(); };
  for (const auto& r : rows)
    csv::write_row(os, {r.country, csv::fmt(r.sentiment), csv::fmt(r.foreign_fighters), opt(r.foreign_fighters_alt),
                        csv::fmt(r.active_terror_group), csv::fmt(r.borders_isis), csv::fmt(r.pct_shia),
                        csv::fmt(r.democracy), csv::fmt(r.pct_broadband), csv::fmt(r.pct_muslim),
                        opt(r.justify_attacks), opt(r.n_tweets)});
}

}  // namespace aggsent::synth
