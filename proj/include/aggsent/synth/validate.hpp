#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aggsent/econometrics/negbin.hpp"
#include "aggsent/econometrics/ols.hpp"
#include "aggsent/econometrics/predict.hpp"
#include "aggsent/events/regressors.hpp"
#include "aggsent/geo/attribute.hpp"
#include "aggsent/geo/panel.hpp"
#include "aggsent/pipeline.hpp"
#include "aggsent/quantifier/classify_count.hpp"
#include "aggsent/quantifier/quantify.hpp"
#include "aggsent/series/daily.hpp"
#include "aggsent/synth/corpus_gen.hpp"
#include "aggsent/synth/event_gen.hpp"
#include "aggsent/synth/oracles.hpp"
#include "aggsent/util/csv.hpp"

namespace aggsent::synth {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds; 0 = none
};

struct ValidateOptions {
  std::uint64_t seed = 1;
  bool quick = false;        // fewer Monte-Carlo seeds; for smoke runs
  std::set<int> criteria;    // empty = all
  unsigned threads = 1;
  bool check_time = false;   // fail criteria that exceed their time limit
  // Byte-identity check of the command-line subcommands, supplied by the CLI.
  std::function<std::pair<bool, std::string>(std::uint64_t seed, unsigned threads)> determinism;
};

// ---------------------------------------------------------------------------
// Scenarios shared by the validation suite and the tests.

/// 3 categories, Zipf background with boosted marker words.
inline LanguageModel prior_shift_language(std::uint64_t seed) {
  MarkerModelSpec ms;
  ms.categories = {Category::Positive, Category::Negative, Category::Neutral};
  ms.vocab_size = 300;
  ms.markers_per_category = 40;
  ms.boost = 20.0;
  ms.zipf_exponent = 0.8;
  ms.seed = seed;
  return make_marker_model(ms);
}

inline GeneratorSpec prior_shift_spec(std::uint64_t seed, std::size_t n_test = 100000) {
  return GeneratorSpec{prior_shift_language(seed), {0.6, 0.3, 0.1}, {0.2, 0.3, 0.5}, 1600, n_test, {}, seed};
}

struct PriorShiftOutcome {
  double mae_quantify = 0.0;
  double mae_classify = 0.0;
  CategoryDistribution truth, estimate, baseline;
};

inline double mae(const CategoryDistribution& a, const CategoryDistribution& truth) {
  double s = 0.0;
  for (Category c : truth.categories()) s += std::abs(a[c] - truth[c]);
  return s / static_cast<double>(truth.size());
}

inline PriorShiftOutcome run_prior_shift(const GeneratorSpec& spec, unsigned threads = 1) {
  auto corpus = gen_corpus(spec);
  PipelineConfig pc;
  pc.quant.rng_seed = spec.seed;
  Pipeline p(corpus.train, pc, threads);
  auto prof = p.profiles(std::span<const Document>(corpus.test), threads);
  PriorShiftOutcome o;
  o.truth = corpus.truth;
  o.estimate = p.quantify(prof, threads).distribution;
  o.baseline = classify_and_count(prof, p.training_profiles(), o.estimate.categories());
  o.mae_quantify = mae(o.estimate, o.truth);
  o.mae_classify = mae(o.baseline, o.truth);
  return o;
}

inline DayWindow event_window() { return {Day(2014, 7, 1), Day(2014, 7, 1) + 214}; }

/// Event-study scenario: 4 categories, 20 events of each of the six kinds
/// on distinct days, day noise sd 0.01, 5,000 documents per day.
struct EventScenario {
  EventEffectSpec effects;
  GeneratorSpec corpus;
  DayWindow window;
};

inline EventScenario event_scenario(std::uint64_t seed, std::size_t docs_per_day = 5000) {
  EventScenario s;
  s.window = event_window();
  MarkerModelSpec ms;
  ms.categories = {Category::Positive, Category::Negative, Category::Neutral, Category::OffTopic};
  ms.vocab_size = 300;
  ms.markers_per_category = 40;
  ms.boost = 20.0;
  ms.seed = seed;
  s.corpus = GeneratorSpec{make_marker_model(ms), {0.3, 0.3, 0.3, 0.1}, {}, 8000, 0, {}, seed};
  s.effects.noise_sd = 0.01;
  s.effects.docs_per_day = docs_per_day;
  s.effects.calendar = random_calendar(s.window, {kCoreEventKinds.begin(), kCoreEventKinds.end()}, 20, seed);
  return s;
}

struct EventOutcome {
  RegressionFit fit;
  std::map<EventKind, bool> sign_ok, covered;
};

inline EventOutcome run_event_study(const EventScenario& sc, unsigned threads = 1) {
  auto stream = gen_event_stream(sc.effects, sc.corpus, sc.window);
  PipelineConfig pc;
  pc.quant.rng_seed = sc.corpus.seed;
  auto series = daily_aggregate(stream.stream, stream.train, pc, sc.window, threads);
  auto dm = build_regressors(sc.effects.calendar, series.rows, nullptr, EventModel::M1, sc.window);
  EventOutcome o;
  o.fit = ols_fit(dm.y, dm.X, dm.names);
  const double cv = o.fit.critical_value(0.95);
  for (const auto& [kind, eff] : sc.effects.effects) {
    const std::string name(to_string(kind));
    const double b = o.fit.coef(name), se = o.fit.se(name);
    o.sign_ok[kind] = eff == 0.0 ? true : (b > 0.0) == (eff > 0.0);
    o.covered[kind] = std::abs(b - eff) <= cv * se;
  }
  return o;
}

/// Random well-conditioned instance for the simplex oracle comparison:
/// K in {2,3} categories, K..4 profiles, tangent condition number <= 8.
struct SimplexInstance {
  Eigen::MatrixXd P;
  Eigen::VectorXd y;
};

inline SimplexInstance random_simplex_instance(Rng& rng) {
  for (;;) {
    const auto k = static_cast<Eigen::Index>(2 + rng.below(2));
    const auto r = static_cast<Eigen::Index>(k + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(5 - k))));
    Eigen::MatrixXd P(r, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < r; ++i) s += (P(i, c) = rng.gamma(1.0));
      P.col(c) /= s;
    }
    const Eigen::MatrixXd t = aggsent::detail::tangent_basis(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.transpose() * P.transpose() * P * t);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 8.0) continue;
    Eigen::VectorXd y(r);
    double s = 0.0;
    for (Eigen::Index i = 0; i < r; ++i) s += (y[i] = rng.gamma(1.0));
    y /= s;
    return {P, y};
  }
}

/// The n = 30 single-covariate negative-binomial instance.
struct NegBinInstance {
  std::vector<double> counts, exposure;
  Eigen::MatrixXd X;
};

inline NegBinInstance negbin_instance(std::uint64_t seed) {
  Rng rng = Rng::substream(seed, {0x9b});
  NegBinInstance in;
  const int n = 30;
  in.X.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    in.X(i, 0) = 1.0;
    in.X(i, 1) = rng.uniform();
    in.exposure.push_back(0.5 + 1.5 * rng.uniform());
    const double mu = in.exposure.back() * std::exp(1.0 - 2.0 * in.X(i, 1));
    in.counts.push_back(static_cast<double>(rng.negbin(mu, 0.5)));
  }
  return in;
}

/// Coefficients of the first country model, fixed for prediction checks.
inline RegressionFit country_model1_fixed() {
  RegressionFit f;
  f.kind = FitKind::NegBin;
  f.names = {"sentiment", "active_terror_group", "borders_isis", "pct_shia", "democracy", "pct_broadband", kConstName};
  f.coefficients.resize(7);
  f.coefficients << -8.451, 1.224, 1.299, -0.0741, -0.0694, 0.129, 2.610;
  f.robust_se.resize(7);
  f.robust_se << 1.933, 0.754, 0.488, 0.0143, 0.0435, 0.0342, 0.845;
  f.n = 61;
  return f;
}

/// Tier-precedence fixtures: a small gazetteer and time-zone table.
struct GeoFixture {
  Gazetteer gz;
  TimeZoneTable tz;
};

inline GeoFixture geo_fixture() {
  GeoFixture f;
  f.gz.add_box({"EG", 22.0, 24.7, 31.7, 36.9});
  f.gz.add_box({"FR", 41.3, -5.2, 51.1, 9.6});
  f.gz.add_box({"SA", 16.3, 34.5, 32.2, 55.7});
  f.gz.add_name("paris", "FR");
  f.gz.add_name("france", "FR");
  f.gz.add_name("cairo", "EG");
  f.gz.add_name("القاهرة", "EG");
  f.gz.add_name("الرياض", "SA");
  f.gz.add_name("riyadh", "SA");
  f.gz.add_name("alexandria", "EG");
  f.gz.add_name("alexandria", "US");
  f.gz.add_name("new york", "US");
  for (const char* c : {"SA", "IQ", "YE", "KW", "QA", "BH"}) f.tz.add_offset(180, c);
  f.tz.add_offset(60, "FR");
  f.tz.add_offset(120, "EG");
  f.tz.add_name("Riyadh", "SA");
  f.tz.add_name("Baghdad", "IQ");
  return f;
}

struct GeoCase {
  std::string label;
  Document doc;
  std::optional<CountryCode> country;
  GeoTier tier;
};

inline std::vector<GeoCase> geo_cases() {
  auto doc = [](std::optional<GeoPoint> g, std::optional<std::string> loc, std::optional<std::int32_t> off,
                std::optional<std::string> zone = std::nullopt) {
    Document d;
    d.id = "g";
    d.geo = g;
    d.user_location = std::move(loc);
    d.utc_offset = off;
    d.time_zone = std::move(zone);
    return d;
  };
  return {
      {"coordinates beat profile", doc(GeoPoint{30.0, 31.2}, "Paris", std::nullopt), "EG", GeoTier::Coordinates},
      {"coordinates beat time zone", doc(GeoPoint{48.8, 2.3}, std::nullopt, 180), "FR", GeoTier::Coordinates},
      {"profile lookup (Arabic)", doc(std::nullopt, "الرياض", std::nullopt), "SA", GeoTier::ProfileLocation},
      {"profile beats time zone", doc(std::nullopt, "Cairo, Egypt", 60), "EG", GeoTier::ProfileLocation},
      {"phrase match", doc(std::nullopt, "I live in New York", std::nullopt), "US", GeoTier::ProfileLocation},
      {"coordinates outside boxes fall through", doc(GeoPoint{-33.9, 151.2}, "Paris", std::nullopt), "FR",
       GeoTier::ProfileLocation},
      {"ambiguous profile falls to time zone", doc(std::nullopt, "Alexandria", 120), "EG", GeoTier::TimeZone},
      {"unique offset", doc(std::nullopt, "somewhere", 60), "FR", GeoTier::TimeZone},
      {"zone name beats offset", doc(std::nullopt, std::nullopt, 180, "Baghdad"), "IQ", GeoTier::TimeZone},
      {"ambiguous offset", doc(std::nullopt, std::nullopt, 180), std::nullopt, GeoTier::Unresolved},
      {"ambiguous profile and offset", doc(std::nullopt, "Alexandria", 180), std::nullopt, GeoTier::Unresolved},
      {"no metadata", doc(std::nullopt, std::nullopt, std::nullopt), std::nullopt, GeoTier::Unresolved},
  };
}

/// 100 documents of which exactly 45 carry resolvable metadata.
inline std::vector<Document> attribution_fixture() {
  std::vector<Document> docs;
  for (int i = 0; i < 100; ++i) {
    Document d;
    char id[16];
    std::snprintf(id, sizeof id, "a%03d", i);
    d.id = id;
    if (i < 15)
      d.geo = GeoPoint{30.0, 31.0};
    else if (i < 30)
      d.user_location = "Riyadh";
    else if (i < 45)
      d.utc_offset = 60;
    else if (i < 70)
      d.utc_offset = 180;
    else if (i < 85)
      d.user_location = "Alexandria";
    docs.push_back(std::move(d));
  }
  return docs;
}

// ---------------------------------------------------------------------------

namespace detail {

inline std::string fmt4(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4f", v);
  return b;
}
inline std::string fmte(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", v);
  return b;
}

inline CriterionResult criterion_oracle(const ValidateOptions& o) {
  CriterionResult r{1, "quantifier matches simplex grid oracle", false, "", 0.0, 10.0};
  Rng rng = Rng::substream(o.seed, {0xc1});
  const int n = 100;
  double worst = 0.0;
  int ok = 0;
  for (int i = 0; i < n; ++i) {
    auto inst = random_simplex_instance(rng);
    std::vector<Category> cats(kAllCategories.begin(), kAllCategories.begin() + inst.P.cols());
    auto pm = ProfileMatrix::from_columns(inst.P, cats);
    auto q = quantify_frequencies(inst.y, pm);
    auto g = oracle_simplex_ls(inst.y, inst.P, 1e-4);
    double dev = 0.0;
    for (std::size_t c = 0; c < cats.size(); ++c) dev = std::max(dev, std::abs(q.distribution.probs()[c] - g.beta[c]));
    worst = std::max(worst, dev);
    ok += dev <= 2e-4;
  }
  r.pass = ok == n;
  r.detail = std::to_string(ok) + "/" + std::to_string(n) + " instances within 2e-4 (max deviation " + fmte(worst) + ")";
  return r;
}

inline CriterionResult criterion_prior_shift(const ValidateOptions& o) {
  CriterionResult r{2, "prior-shift robustness vs classify-and-count", false, "", 0.0, 300.0};
  const int seeds = o.quick ? 5 : 50;
  double sum = 0.0;
  int wins = 0;
  for (int i = 0; i < seeds; ++i) {
    auto out = run_prior_shift(prior_shift_spec(o.seed + static_cast<std::uint64_t>(i)), o.threads);
    sum += out.mae_quantify;
    wins += out.mae_quantify < out.mae_classify;
  }
  const double mean = sum / seeds;
  r.pass = mean <= 0.02 && wins * 10 >= seeds * 9;
  r.detail = "mean MAE " + fmt4(mean) + " (<= 0.02), beats classify-and-count in " + std::to_string(wins) + "/" +
             std::to_string(seeds) + " seeds (>= 90%)";
  return r;
}

inline CriterionResult criterion_negbin(const ValidateOptions& o) {
  CriterionResult r{3, "negative binomial matches likelihood grid oracle", false, "", 0.0, 0.0};
  auto in = negbin_instance(o.seed);
  const std::vector<std::string> names{"const", "x"};
  auto fit = negbin_fit(in.counts, in.X, in.exposure, names);
  auto grid = oracle_negbin_grid(in.counts, in.X, in.exposure, ParamBox{{-2.0, -6.0, 0.0}, {4.0, 2.0, 3.0}}, 0.05);
  const double a = fit.alpha.value_or(0.0);
  const double dev = std::max({std::abs(fit.coefficients[0] - grid.beta[0]), std::abs(fit.coefficients[1] - grid.beta[1]),
                               std::abs(a - grid.alpha)});
  const bool ll_order = grid.loglik <= fit.loglik + 1e-8;
  double shift_dev = 0.0;
  for (double c : {10.0, 0.1}) {
    std::vector<double> e2 = in.exposure;
    for (double& e : e2) e *= c;
    auto f2 = negbin_fit(in.counts, in.X, e2, names);
    shift_dev = std::max(shift_dev, std::abs((f2.coefficients[0] - fit.coefficients[0]) + std::log(c)));
    shift_dev = std::max(shift_dev, std::abs(f2.coefficients[1] - fit.coefficients[1]));
  }
  r.pass = dev <= 1e-4 && ll_order && shift_dev <= 1e-6;
  r.detail = "max |fit - oracle| " + fmte(dev) + " (<= 1e-4), exposure rescaling deviation " + fmte(shift_dev) +
             " (<= 1e-6), oracle loglik <= fit loglik: " + (ll_order ? "yes" : "no");
  return r;
}

inline CriterionResult criterion_prediction(const ValidateOptions&) {
  CriterionResult r{4, "prediction ratio under fixed country-model coefficients", false, "", 0.0, 0.0};
  auto fit = country_model1_fixed();
  CovariateRow base{{"sentiment", 0.10}, {"active_terror_group", 1.0}, {"borders_isis", 0.0}, {"pct_shia", 10.0},
                    {"democracy", 5.0},  {"pct_broadband", 10.0}};
  CovariateRow high = base;
  high["sentiment"] = 0.20;
  auto p = predict_counts(fit, {base, high}, 10.0);
  const double ratio = p[1] / p[0];
  r.pass = std::abs(ratio - 0.4295) <= 1e-4 && ratio < 0.5;
  r.detail = "ratio " + fmt4(ratio) + " (0.4295 +- 1e-4, below one half)";
  return r;
}

inline double brute_force_hc1_max_dev() {
  const double x[4] = {0, 1, 2, 3}, y[4] = {0, 1, 2, 4};
  Eigen::MatrixXd X(4, 2);
  Eigen::VectorXd yv(4);
  for (int i = 0; i < 4; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = x[i];
    yv[i] = y[i];
  }
  auto f = ols_fit(yv, X, {"const", "x"});
  // Element-by-element: (X'X)^-1 by the 2x2 adjugate, meat by explicit sums.
  double sxx[2][2] = {{0, 0}, {0, 0}};
  for (int i = 0; i < 4; ++i) {
    const double row[2] = {1.0, x[i]};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) sxx[a][b] += row[a] * row[b];
  }
  const double det = sxx[0][0] * sxx[1][1] - sxx[0][1] * sxx[1][0];
  const double inv[2][2] = {{sxx[1][1] / det, -sxx[0][1] / det}, {-sxx[1][0] / det, sxx[0][0] / det}};
  double xty[2] = {0, 0};
  for (int i = 0; i < 4; ++i) {
    xty[0] += y[i];
    xty[1] += x[i] * y[i];
  }
  const double b0 = inv[0][0] * xty[0] + inv[0][1] * xty[1], b1 = inv[1][0] * xty[0] + inv[1][1] * xty[1];
  double meat[2][2] = {{0, 0}, {0, 0}};
  for (int i = 0; i < 4; ++i) {
    const double e = y[i] - b0 - b1 * x[i];
    const double row[2] = {1.0, x[i]};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) meat[a][b] += e * e * row[a] * row[b];
  }
  double dev = std::max(std::abs(f.coefficients[0] - b0), std::abs(f.coefficients[1] - b1));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double v = 0.0;
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) v += inv[a][c] * meat[c][d] * inv[d][b];
      v *= 4.0 / 2.0;
      dev = std::max(dev, std::abs(f.robust_cov(a, b) - v));
    }
  return dev;
}

inline CriterionResult criterion_ols(const ValidateOptions& o) {
  CriterionResult r{5, "OLS sandwich and residual orthogonality", false, "", 0.0, 0.0};
  const double hc1_dev = brute_force_hc1_max_dev();
  Rng rng = Rng::substream(o.seed, {0xc5});
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto n = static_cast<Eigen::Index>(10 + rng.below(200));
    const auto p = static_cast<Eigen::Index>(1 + rng.below(8));
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, 0) = 1.0;
      for (Eigen::Index j = 1; j < p; ++j) X(i, j) = rng.normal() * std::pow(10.0, static_cast<double>(j % 3));
      y[i] = rng.normal() * 3.0 + X.row(i).sum();
    }
    std::vector<std::string> names;
    for (Eigen::Index j = 0; j < p; ++j) names.push_back("x" + std::to_string(j));
    auto f = ols_fit(y, X, names);
    const double orth = (X.transpose() * f.residuals).cwiseAbs().maxCoeff() / std::max(1.0, y.norm());
    worst = std::max(worst, orth);
  }
  r.pass = hc1_dev <= 1e-10 && worst < 1e-8;
  r.detail = "HC1 vs brute force " + fmte(hc1_dev) + " (<= 1e-10), max |X'e|/|y| over 50 fits " + fmte(worst) +
             " (< 1e-8)";
  return r;
}

inline CriterionResult criterion_event_study(const ValidateOptions& o) {
  CriterionResult r{6, "event-study effect recovery", false, "", 0.0, 600.0};
  const int seeds = o.quick ? 3 : 25;
  std::map<EventKind, int> good;
  for (int i = 0; i < seeds; ++i) {
    auto sc = event_scenario(o.seed + static_cast<std::uint64_t>(i));
    auto out = run_event_study(sc, o.threads);
    for (const auto& [k, eff] : sc.effects.effects) good[k] += out.sign_ok[k] && out.covered[k];
  }
  bool all = true;
  std::string d;
  for (const auto& [k, n] : good) {
    all = all && n * 10 >= seeds * 9;
    d += std::string(to_string(k)) + " " + std::to_string(n) + "/" + std::to_string(seeds) + "; ";
  }
  r.pass = all;
  r.detail = "sign and 95% CI coverage: " + d.substr(0, d.size() - 2) + " (each >= 90%)";
  return r;
}

inline CriterionResult criterion_geo(const ValidateOptions&) {
  CriterionResult r{7, "geo cascade fixtures and attribution rate", false, "", 0.0, 0.0};
  auto fx = geo_fixture();
  int ok = 0;
  const auto cases = geo_cases();
  std::string failed;
  for (const auto& c : cases) {
    auto a = attribute_country(c.doc, fx.gz, fx.tz);
    if (a.country == c.country && a.tier == c.tier)
      ++ok;
    else
      failed += " [" + c.label + "]";
  }
  auto docs = attribution_fixture();
  std::size_t resolved = 0;
  for (const auto& d : docs) resolved += attribute_country(d, fx.gz, fx.tz).country.has_value();
  const double rate = static_cast<double>(resolved) / static_cast<double>(docs.size());
  r.pass = ok == static_cast<int>(cases.size()) && rate == 0.45;
  r.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) + " precedence cases" + failed +
             ", attribution rate " + csv::fmt(rate) + " (0.45 exactly)";
  return r;
}

inline CriterionResult criterion_determinism(const ValidateOptions& o) {
  CriterionResult r{8, "byte-identical subcommand outputs across runs and thread counts", false, "", 0.0, 0.0};
  if (!o.determinism) {
    r.detail = "not available outside the command-line tool";
    return r;
  }
  auto [ok, detail] = o.determinism(o.seed, 4);
  r.pass = ok;
  r.detail = detail;
  return r;
}

}  // namespace detail

inline std::vector<CriterionResult> run_validation(const ValidateOptions& o) {
  using Fn = CriterionResult (*)(const ValidateOptions&);
  const std::vector<std::pair<int, Fn>> all{
      {1, detail::criterion_oracle},     {2, detail::criterion_prior_shift}, {3, detail::criterion_negbin},
      {4, detail::criterion_prediction}, {5, detail::criterion_ols},         {6, detail::criterion_event_study},
      {7, detail::criterion_geo},        {8, detail::criterion_determinism}};
  for (int c : o.criteria)
    if (c < 1 || c > 8) throw ConfigError("unknown criterion " + std::to_string(c));
  std::vector<CriterionResult> out;
  for (const auto& [id, fn] : all) {
    if (!o.criteria.empty() && !o.criteria.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fn(o);
    } catch (const Error& e) {
      r.id = id;
      r.pass = false;
      r.detail = std::string("error: ") + e.kind() + ": " + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.check_time && r.time_limit > 0.0 && r.seconds > r.time_limit) {
      r.pass = false;
      r.detail += "; runtime " + detail::fmt4(r.seconds) + " s exceeds " + detail::fmt4(r.time_limit) + " s";
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// One line per criterion. Timings are appended only when requested, so the
/// default report is reproducible byte for byte.
inline std::string format_report(const std::vector<CriterionResult>& rs, bool with_time = false) {
  std::ostringstream os;
  for (const auto& r : rs) {
    os << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.name << " -- " << r.detail;
    if (with_time) {
      char b[64];
      std::snprintf(b, sizeof b, " [%.1f s", r.seconds);
      os << b;
      if (r.time_limit > 0.0) {
        std::snprintf(b, sizeof b, ", limit %.0f s", r.time_limit);
        os << b;
      }
      os << "]";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace aggsent::synth
