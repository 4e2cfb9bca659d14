#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "aggsent/cli/config.hpp"
#include "aggsent/corpus/io.hpp"
#include "aggsent/corpus/query.hpp"
#include "aggsent/econometrics/country_model.hpp"
#include "aggsent/econometrics/ols.hpp"
#include "aggsent/econometrics/predict.hpp"
#include "aggsent/events/regressors.hpp"
#include "aggsent/geo/panel.hpp"
#include "aggsent/pipeline.hpp"
#include "aggsent/quantifier/bootstrap.hpp"
#include "aggsent/series/daily.hpp"
#include "aggsent/series/smooth.hpp"
#include "aggsent/synth/panel_gen.hpp"
#include "aggsent/synth/validate.hpp"
#include "aggsent/util/hash.hpp"

namespace aggsent::cli {

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

inline std::vector<Document> load_documents(const std::string& path) {
  auto in = open_input(path);
  return read_documents(in, path);
}

inline std::optional<Day> parse_day_flag(const std::string& s, const char* flag) {
  if (s.empty()) return std::nullopt;
  auto d = parse_day(s);
  if (!d) throw ConfigError(std::string(flag) + ": expected YYYY-MM-DD, got '" + s + "'");
  return d;
}

/// Writes every file or none: contents go to temporaries first, renamed
/// into place once all are complete.
inline void write_atomically(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> temps;
  try {
    for (const auto& [path, content] : files) {
      const std::string tmp = path + ".tmp";
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw InputError("cannot write '" + tmp + "'");
      temps.push_back(tmp);
      f << content;
      f.close();
      if (!f) throw InputError("write failed for '" + tmp + "'");
    }
    for (std::size_t i = 0; i < files.size(); ++i) std::filesystem::rename(temps[i], files[i].first);
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) std::filesystem::remove(t, ec);
    throw;
  }
}

inline std::string header_line(const std::string& cmd, const std::string& config, std::uint64_t seed) {
  return "# aggsent " + cmd + " config_hash=" + hex64(fnv1a64(config)) + " seed=" + std::to_string(seed) + "\n";
}

inline std::string coefficient_table(const RegressionFit& f) {
  std::ostringstream os;
  os << "name,coef,robust_se,stars\n";
  for (std::size_t j = 0; j < f.names.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    csv::write_row(os, {f.names[j], csv::fmt(f.coefficients[i]), csv::fmt(f.robust_se[i]), stars(f.p_value(j))});
  }
  if (f.alpha) csv::write_row(os, {"alpha", csv::fmt(*f.alpha), f.alpha_se ? csv::fmt(*f.alpha_se) : "", ""});
  return os.str();
}

inline std::string fit_summary(const RegressionFit& f) {
  std::string s = "# n=" + std::to_string(f.n) + " loglik=" + csv::fmt(f.loglik);
  if (f.bic) s += " bic=" + csv::fmt(*f.bic);
  if (f.kind == FitKind::NegBin) s += std::string(" poisson_limit=") + (f.poisson_limit ? "1" : "0");
  return s + "\n";
}

struct Inputs {
  std::string labels, training_docs, stream, query;
};

struct LoadedCorpus {
  TrainingSet train;
  std::vector<Document> stream;
};

/// Loads and checks every corpus input before any estimation starts.
inline LoadedCorpus load_corpus(const Inputs& in) {
  LoadedCorpus lc;
  auto lf = open_input(in.labels);
  auto rows = read_label_rows(lf, in.labels);
  lc.stream = load_documents(in.stream);
  std::vector<Document> train_docs;
  if (!in.training_docs.empty()) train_docs = load_documents(in.training_docs);
  std::optional<QuerySpec> q;
  if (!in.query.empty()) {
    auto qf = open_input(in.query);
    q = read_query(qf);
  }
  auto merged = merge_labels(rows);
  lc.train = make_training_set(merged, in.training_docs.empty() ? std::span<const Document>(lc.stream)
                                                                 : std::span<const Document>(train_docs));
  if (q) std::erase_if(lc.stream, [&](const Document& d) { return !match_query(d.text, *q); });
  return lc;
}

inline void add_corpus_flags(CLI::App* c, Inputs& in, bool need_stream = true) {
  c->add_option("--labels", in.labels, "training labels CSV (doc_id,category[,coder_id])")->required();
  c->add_option("--training-docs", in.training_docs, "JSONL with the labeled documents (default: the stream)");
  auto s = c->add_option("--stream", in.stream, "document stream JSONL");
  if (need_stream) s->required();
  c->add_option("--query", in.query, "query file; only matching stream documents are used");
}

inline std::vector<DailySeriesRow> read_series(std::istream& in, const std::string& src) {
  auto t = csv::read_table(in, src);
  const auto dc = t.require("date"), nc = t.require("n_tweets"), sc = t.require("sentiment");
  std::vector<DailySeriesRow> rows;
  for (const auto& r : t.rows) {
    DailySeriesRow row;
    auto d = parse_day(r.fields[dc]);
    if (!d) throw ParseError(src, r.line, "bad date '" + r.fields[dc] + "'");
    if (!rows.empty() && !(rows.back().date < *d)) throw ParseError(src, r.line, "dates must increase");
    row.date = *d;
    const auto n = csv::to_int(r.fields[nc], src, r.line);
    if (n < 0) throw ParseError(src, r.line, "negative n_tweets");
    row.n_tweets = static_cast<std::size_t>(n);
    row.sentiment = csv::to_double(r.fields[sc], src, r.line);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(src + ": no rows");
  return rows;
}

inline std::string int_list(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += std::to_string(x) + ",";
  return s;
}

constexpr const char* kCorpusFormats =
    "Stream / training documents (JSONL):\n"
    "  {\"id\":\"1\",\"timestamp\":\"2014-07-01T08:00:00Z\",\"text\":\"...\",\"user_location\":\"Cairo\"}\n"
    "  {\"id\":\"2\",\"timestamp\":\"2014-07-01T09:30:00Z\",\"text\":\"...\",\"utc_offset\":180}\n"
    "  {\"id\":\"3\",\"timestamp\":\"2014-07-02T11:00:00Z\",\"text\":\"...\",\"geo\":{\"lat\":30.0,\"lon\":31.2}}\n"
    "Labels (CSV):\n"
    "  doc_id,category,coder_id\n"
    "  1,Positive,a\n"
    "  1,Positive,b\n"
    "Query (one term per line, OR-ed):\n"
    "  ISIS\n"
    "  داعش\n"
    "  الدولة الاسلامية\n"
    "Config (--config, key = value):\n"
    "  n_subsets = 50\n"
    "  words_per_subset = 12\n"
    "  categories = Positive,Negative,Neutral,OffTopic\n";

}  // namespace detail

/// In-process command line. Returns the exit status: 0 success, 1 runtime
/// error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs each subcommand on a generated fixture twice single-threaded and
/// once with `threads`, comparing outputs byte for byte.
inline std::pair<bool, std::string> determinism_check(std::uint64_t seed, unsigned threads);

namespace detail {

struct Common {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 1;
  std::string config, out;
};

inline RunSettings load_settings(const Common& c) {
  RunSettings s;
  if (!c.config.empty()) {
    auto in = open_input(c.config);
    s = read_settings(in, c.config);
  }
  s.pipeline.quant.rng_seed = c.seed;
  return s;
}

inline void emit(const Common& c, const std::string& content, std::ostream& out,
                 std::vector<std::pair<std::string, std::string>> extra = {}) {
  if (!c.out.empty()) extra.insert(extra.begin(), {c.out, content});
  if (!extra.empty()) write_atomically(extra);
  if (c.out.empty()) out << content;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Aggregate sentiment quantification and event-study toolkit"};
  app.name("aggsent");
  app.require_subcommand(1, 1);
  Common com;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--threads", com.threads, "worker threads (default: all cores; results do not depend on it)")
        ->check(CLI::PositiveNumber);
    c->add_option("--seed", com.seed, "seed for every random draw");
    c->add_option("--config", com.config, "settings file (key = value)");
    c->add_option("--out", com.out, "output file (default: stdout); written atomically");
  };

  // quantify
  Inputs q_in;
  bool q_bootstrap = true;
  auto* qc = app.add_subcommand("quantify", "Estimate category proportions of a document stream");
  add_common(qc);
  add_corpus_flags(qc, q_in);
  qc->add_flag("!--no-ci", q_bootstrap, "skip bootstrap intervals");
  qc->footer(std::string(kCorpusFormats) +
             "Output (CSV):\n  category,estimate,ci_low,ci_high\n  Positive,0.251,0.238,0.265\n"
             "  Negative,0.749,0.735,0.762\n");

  // daily-series
  Inputs d_in;
  std::string d_from, d_to;
  auto* dc = app.add_subcommand("daily-series", "Per-day sentiment, deviations and smoothed trends");
  add_common(dc);
  add_corpus_flags(dc, d_in);
  dc->add_option("--from", d_from, "first day (YYYY-MM-DD; default: earliest document)");
  dc->add_option("--to", d_to, "last day (YYYY-MM-DD; default: latest document)");
  dc->footer(std::string(kCorpusFormats) +
             "Output (CSV):\n"
             "  date,n_tweets,sentiment,sentiment_deviation,attention_deviation,lowess_sentiment,lowess_attention\n"
             "  2014-07-01,5012,0.243,-0.008,-120.4,-0.006,-98.1\n"
             "  2014-07-02,5120,0.262,0.011,-12.4,-0.004,-90.3\n");

  // event-regress
  std::string e_series, e_calendar, e_news, e_from, e_to;
  int e_model = 1;
  auto* ec = app.add_subcommand("event-regress", "Regress daily sentiment deviation on event indicators");
  add_common(ec);
  ec->add_option("--series", e_series, "daily-series output CSV")->required();
  ec->add_option("--calendar", e_calendar, "event calendar CSV (date,kind)")->required();
  ec->add_option("--news", e_news, "news volume CSV (date,article_count); model 3");
  ec->add_option("--model", e_model, "1: events and lag; 2: adds attention and Charlie Hebdo; 3: adds news lag")
      ->check(CLI::Range(1, 3));
  ec->add_option("--from", e_from, "first day of the estimation window");
  ec->add_option("--to", e_to, "last day of the estimation window");
  ec->footer(
      "Calendar (CSV; kinds: mosque_imam_attack, military_victory, military_defeat, beheading_western,\n"
      "beheading_non_western, muslim_unity_speech, charlie_hebdo):\n"
      "  date,kind\n  2014-08-19,beheading_western\n  2015-01-07,charlie_hebdo\n"
      "News (CSV):\n  date,article_count\n  2014-07-01,12\n  2014-07-02,7\n"
      "Output (CSV):\n  name,coef,robust_se,stars\n  mosque_imam_attack,-0.046,0.012,***\n"
      "  sentiment_deviation_lag,0.41,0.07,***\n");

  // ff-model
  std::string f_panel, f_exposure = "pct_muslim", f_alt = "foreign_fighters_alt", f_predict, f_predict_out;
  int f_model = 1;
  bool f_drop_us = false;
  double f_min_volume = 15000.0, f_predict_exposure = 1.0;
  auto* fc = app.add_subcommand("ff-model", "Negative binomial model of foreign-fighter counts by country");
  add_common(fc);
  fc->add_option("--panel", f_panel, "country panel CSV")->required();
  fc->add_option("--model", f_model, "covariate set 1..5")->check(CLI::Range(1, 5));
  fc->add_option("--exposure-col", f_exposure, "exposure column (enters as log offset)");
  fc->add_option("--alt-count-col", f_alt, "count column for model 4");
  fc->add_option("--min-volume", f_min_volume, "model 2: minimum n_tweets");
  fc->add_flag("--drop-us", f_drop_us, "exclude the United States (always on for model 3)");
  fc->add_option("--predict", f_predict, "covariate grid CSV; one column per regressor (const defaults to 1)");
  fc->add_option("--predict-out", f_predict_out, "where to write predictions (required with --predict)");
  fc->add_option("--predict-exposure", f_predict_exposure, "exposure used for predictions");
  fc->footer(
      "Panel (CSV; optional: foreign_fighters_alt, justify_attacks, n_tweets):\n"
      "  country,sentiment,foreign_fighters,active_terror_group,borders_isis,pct_shia,democracy,pct_broadband,"
      "pct_muslim\n"
      "  EG,0.21,600,1,0,1,-3,3.3,94.7\n  FR,0.18,1550,0,0,35,9,40.2,7.5\n"
      "Prediction grid (CSV):\n  sentiment,active_terror_group,borders_isis,pct_shia,democracy,pct_broadband\n"
      "  0.10,1,0,10,5,10\n  0.20,1,0,10,5,10\n");

  // geo-attribute
  Inputs g_in;
  std::string g_names, g_boxes, g_tz;
  std::size_t g_min = 1001;
  bool g_drop_us = false;
  auto* gc = app.add_subcommand("geo-attribute", "Attribute documents to countries and estimate per-country sentiment");
  add_common(gc);
  add_corpus_flags(gc, g_in);
  gc->add_option("--gazetteer", g_names, "place names CSV (normalized_name,iso2)")->required();
  gc->add_option("--boxes", g_boxes, "country boxes CSV (iso2,min_lat,min_lon,max_lat,max_lon)");
  gc->add_option("--timezones", g_tz, "time zone CSV (offset_minutes_or_name,iso2)");
  gc->add_option("--min-tweets", g_min, "minimum attributed documents per country")->check(CLI::PositiveNumber);
  gc->add_flag("--drop-us", g_drop_us, "exclude the United States");
  gc->footer(std::string(kCorpusFormats) +
             "Gazetteer (CSV):\n  normalized_name,iso2\n  cairo,EG\n  القاهرة,EG\n"
             "Boxes (CSV):\n  iso2,min_lat,min_lon,max_lat,max_lon\n  EG,22.0,24.7,31.7,36.9\n  FR,41.3,-5.2,51.1,9.6\n"
             "Time zones (CSV; integer keys are UTC offsets in minutes):\n  offset_minutes_or_name,iso2\n"
             "  180,SA\n  Riyadh,SA\n");

  // synth-validate
  bool v_quick = false, v_timing = false;
  std::vector<int> v_criteria;
  auto* vc = app.add_subcommand("synth-validate", "Run the synthetic acceptance suite");
  add_common(vc);
  vc->add_flag("--quick", v_quick, "fewer Monte-Carlo seeds");
  vc->add_option("--criteria", v_criteria, "subset of criteria, e.g. 1,4,7")->delimiter(',');
  vc->add_flag("--timing", v_timing, "report runtimes and enforce time limits (output no longer reproducible)");
  vc->footer(
      "Output (one line per criterion):\n  PASS criterion 4: ... -- ratio 0.4295 (0.4295 +- 1e-4, below one half)\n"
      "  FAIL criterion 6: ... -- sign and 95% CI coverage: ...\n  # 7/8 passed\n");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return 2;
  }

  try {
    const std::string seed_s = ";seed=" + std::to_string(com.seed);
    if (*qc) {
      auto s = load_settings(com);
      auto lc = load_corpus(q_in);
      if (lc.stream.empty()) throw InputError("no stream documents to quantify");
      Pipeline p(lc.train, s.pipeline, com.threads);
      auto prof = p.profiles(std::span<const Document>(lc.stream), com.threads);
      std::ostringstream os;
      os << header_line("quantify", s.canonical() + ";ci=" + std::to_string(q_bootstrap) + seed_s, com.seed);
      os << "category,estimate,ci_low,ci_high\n";
      if (q_bootstrap) {
        BootstrapOptions bo{s.pipeline.quant.bootstrap_reps, s.ci_level, com.seed, s.resample_training};
        for (const auto& iv : bootstrap_ci(prof, p.training_profiles(), p.ensemble(), bo, com.threads))
          csv::write_row(os, {std::string(to_string(iv.category)), csv::fmt(iv.estimate), csv::fmt(iv.low),
                              csv::fmt(iv.high)});
      } else {
        auto r = p.quantify(prof, com.threads).distribution;
        for (std::size_t i = 0; i < r.size(); ++i)
          csv::write_row(os, {std::string(to_string(r.categories()[i])), csv::fmt(r.probs()[i]), "", ""});
      }
      emit(com, os.str(), out);
    } else if (*dc) {
      auto s = load_settings(com);
      auto from = parse_day_flag(d_from, "--from"), to = parse_day_flag(d_to, "--to");
      auto lc = load_corpus(d_in);
      if (lc.stream.empty()) throw InputError("no stream documents");
      if (!from || !to) {
        auto [lo, hi] = std::minmax_element(lc.stream.begin(), lc.stream.end(),
                                            [](const Document& a, const Document& b) { return a.day() < b.day(); });
        if (!from) from = lo->day();
        if (!to) to = hi->day();
      }
      Pipeline p(lc.train, s.pipeline, com.threads);
      auto ds = daily_aggregate(lc.stream, p, DayWindow{*from, *to}, com.threads);
      for (const auto& sk : ds.skipped)
        err << "skipped " << sk.date.iso() << " (" << sk.n_tweets << " documents): " << sk.reason << "\n";
      const auto x = ds.day_serials();
      std::vector<double> sd, ad;
      for (const auto& r : ds.rows) {
        sd.push_back(r.sentiment_deviation);
        ad.push_back(r.attention_deviation);
      }
      std::vector<double> ls, la;
      if (ds.rows.size() >= 3) {
        ls = lowess(x, sd, s.lowess_frac);
        la = lowess(x, ad, s.lowess_frac);
      }
      std::ostringstream os;
      os << header_line("daily-series", s.canonical() + ";from=" + from->iso() + ";to=" + to->iso() + seed_s, com.seed);
      os << "date,n_tweets,sentiment,sentiment_deviation,attention_deviation,lowess_sentiment,lowess_attention\n";
      for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        const auto& r = ds.rows[i];
        csv::write_row(os, {r.date.iso(), std::to_string(r.n_tweets), csv::fmt(r.sentiment),
                            csv::fmt(r.sentiment_deviation), csv::fmt(r.attention_deviation),
                            ls.empty() ? "" : csv::fmt(ls[i]), la.empty() ? "" : csv::fmt(la[i])});
      }
      emit(com, os.str(), out);
    } else if (*ec) {
      auto s = load_settings(com);
      auto from = parse_day_flag(e_from, "--from"), to = parse_day_flag(e_to, "--to");
      auto sf = open_input(e_series);
      auto rows = read_series(sf, e_series);
      auto cf = open_input(e_calendar);
      auto cal = read_calendar(cf, e_calendar);
      std::optional<NewsSeries> news;
      if (!e_news.empty()) {
        auto nf = open_input(e_news);
        news = read_news(nf, e_news);
      }
      if (e_model == 3 && !news) throw ConfigError("model 3 needs --news");
      DayWindow w{from.value_or(rows.front().date), to.value_or(rows.back().date)};
      std::erase_if(rows, [&](const DailySeriesRow& r) { return r.date < w.first || w.last < r.date; });
      if (rows.empty()) throw InputError("no series rows inside the window");
      compute_deviations(rows);
      auto dm = build_regressors(cal, rows, news ? &*news : nullptr, static_cast<EventModel>(e_model), w);
      auto fit = ols_fit(dm.y, dm.X, dm.names);
      std::ostringstream os;
      os << header_line("event-regress",
                        s.canonical() + ";model=" + std::to_string(e_model) + ";from=" + w.first.iso() +
                            ";to=" + w.last.iso() + seed_s,
                        com.seed);
      os << fit_summary(fit) << coefficient_table(fit);
      emit(com, os.str(), out);
    } else if (*fc) {
      auto s = load_settings(com);
      if (!f_predict.empty() && f_predict_out.empty()) throw ConfigError("--predict needs --predict-out");
      auto pf = open_input(f_panel);
      auto panel = read_country_panel(pf, f_panel);
      std::optional<csv::Table> grid_t;
      if (!f_predict.empty()) {
        auto gf = open_input(f_predict);
        grid_t = csv::read_table(gf, f_predict);
      }
      CountryModelOptions mo{f_model, f_exposure, f_alt, f_min_volume, f_drop_us};
      auto fit = fit_country_model(panel, mo);
      const std::string cfg = s.canonical() + ";model=" + std::to_string(f_model) + ";exposure=" + f_exposure +
                              ";alt=" + f_alt + ";min_volume=" + csv::fmt(f_min_volume) +
                              ";drop_us=" + std::to_string(f_drop_us) + seed_s;
      std::ostringstream os;
      os << header_line("ff-model", cfg, com.seed) << fit_summary(fit) << coefficient_table(fit);
      std::vector<std::pair<std::string, std::string>> extra;
      if (grid_t) {
        std::vector<CovariateRow> grid;
        for (const auto& r : grid_t->rows) {
          CovariateRow row;
          for (std::size_t j = 0; j < grid_t->header.size(); ++j)
            row[grid_t->header[j]] = csv::to_double(r.fields[j], f_predict, r.line);
          grid.push_back(std::move(row));
        }
        auto pred = predict_counts(fit, grid, f_predict_exposure);
        std::ostringstream ps;
        ps << header_line("ff-model", cfg + ";predict_exposure=" + csv::fmt(f_predict_exposure), com.seed);
        auto head = grid_t->header;
        head.push_back("predicted");
        csv::write_row(ps, head);
        for (std::size_t i = 0; i < grid.size(); ++i) {
          auto fields = grid_t->rows[i].fields;
          fields.push_back(csv::fmt(pred[i]));
          csv::write_row(ps, fields);
        }
        extra.emplace_back(f_predict_out, ps.str());
      }
      emit(com, os.str(), out, std::move(extra));
    } else if (*gc) {
      auto s = load_settings(com);
      Gazetteer gz;
      {
        auto nf = open_input(g_names);
        read_gazetteer_names(gz, nf, g_names);
      }
      if (!g_boxes.empty()) {
        auto bf = open_input(g_boxes);
        read_gazetteer_boxes(gz, bf, g_boxes);
      }
      TimeZoneTable tz;
      if (!g_tz.empty()) {
        auto tf = open_input(g_tz);
        tz = read_timezones(tf, g_tz);
      }
      auto lc = load_corpus(g_in);
      Pipeline p(lc.train, s.pipeline, com.threads);
      auto panel = country_panel(lc.stream, p, gz, tz, CountryPanelOptions{g_min, g_drop_us}, com.threads);
      for (const auto& [c, why] : panel.skipped) err << "skipped " << c << ": " << why << "\n";
      std::ostringstream os;
      os << header_line("geo-attribute",
                        s.canonical() + ";min_tweets=" + std::to_string(g_min) + ";drop_us=" +
                            std::to_string(g_drop_us) + seed_s,
                        com.seed);
      os << "# documents=" << panel.n_documents << " attributed=" << panel.n_attributed
         << " attribution_rate=" << csv::fmt(panel.attribution_rate());
      for (std::size_t t = 0; t < 4; ++t) os << ' ' << to_string(static_cast<GeoTier>(t)) << '=' << panel.tier_counts[t];
      os << "\ncountry,n_tweets,sentiment,us_flag\n";
      for (const auto& r : panel.rows)
        csv::write_row(os, {r.country, std::to_string(r.n_tweets), csv::fmt(r.sentiment), r.us_flag ? "1" : "0"});
      emit(com, os.str(), out);
    } else if (*vc) {
      synth::ValidateOptions vo;
      vo.seed = com.seed;
      vo.quick = v_quick;
      vo.criteria = {v_criteria.begin(), v_criteria.end()};
      vo.threads = com.threads;
      vo.check_time = v_timing;
      vo.determinism = [](std::uint64_t sd, unsigned th) { return determinism_check(sd, th); };
      auto res = synth::run_validation(vo);
      std::ostringstream os;
      os << header_line("synth-validate",
                        "quick=" + std::to_string(v_quick) + ";criteria=" + int_list(v_criteria) + seed_s, com.seed);
      os << synth::format_report(res, v_timing);
      const auto passed = std::count_if(res.begin(), res.end(), [](const auto& r) { return r.pass; });
      os << "# " << passed << "/" << res.size() << " passed\n";
      emit(com, os.str(), out);
      return passed == static_cast<long>(res.size()) ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------

namespace detail {

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot write '" + p.string() + "'");
  f << s;
}

/// Small end-to-end fixture: a labeled training set, a 40-day stream with
/// location metadata, an event calendar, news counts, a country panel and
/// geographic tables.
inline void write_fixture(const std::filesystem::path& dir, std::uint64_t seed) {
  const DayWindow w{Day(2014, 7, 1), Day(2014, 7, 1) + 39};
  synth::MarkerModelSpec ms;
  ms.categories = {Category::Positive, Category::Negative, Category::Neutral, Category::OffTopic};
  ms.seed = seed;
  synth::GeneratorSpec g{synth::make_marker_model(ms), {0.3, 0.3, 0.3, 0.1}, {}, 800, 0, {}, seed};
  synth::EventEffectSpec es;
  es.docs_per_day = 120;
  es.calendar = synth::random_calendar(w, {kAllEventKinds.begin(), kAllEventKinds.end()}, 2, seed);
  auto st = synth::gen_event_stream(es, g, w);

  // Thin the stream unevenly so daily volumes vary.
  std::vector<Document> kept;
  for (std::size_t i = 0; i < st.stream.size(); ++i) {
    Rng rng = Rng::substream(seed, {0x741, i});
    const double keep = 0.5 + 0.4 * std::sin(0.3 * static_cast<double>(st.stream[i].day() - w.first));
    if (rng.uniform() < keep) kept.push_back(st.stream[i]);
  }
  st.stream = std::move(kept);

  const char* places[] = {"Cairo", "Riyadh", "Paris", "Alexandria", "somewhere"};
  const std::int32_t offsets[] = {60, 120, 180};
  for (std::size_t i = 0; i < st.stream.size(); ++i) {
    Rng rng = Rng::substream(seed, {0x6e0, i});
    auto& d = st.stream[i];
    const double u = rng.uniform();
    if (u < 0.2)
      d.geo = GeoPoint{22.5 + 9.0 * rng.uniform(), 25.0 + 11.0 * rng.uniform()};
    else if (u < 0.6)
      d.user_location = places[rng.below(5)];
    else if (u < 0.8)
      d.utc_offset = offsets[rng.below(3)];
  }

  std::ostringstream tr, lb;
  lb << "doc_id,category\n";
  std::vector<Document> tdocs;
  for (const auto& it : st.train.items) {
    tdocs.push_back(it.doc);
    csv::write_row(lb, {it.doc.id, std::string(to_string(it.label))});
  }
  write_documents(tr, tdocs);
  write_text(dir / "training.jsonl", tr.str());
  write_text(dir / "labels.csv", lb.str());
  std::ostringstream ss;
  write_documents(ss, st.stream);
  write_text(dir / "stream.jsonl", ss.str());
  write_text(dir / "query.txt", "w1\nw2\n");

  std::ostringstream cal, news;
  cal << "date,kind\n";
  for (const auto& e : es.calendar.entries) cal << e.date.iso() << ',' << to_string(e.kind) << '\n';
  news << "date,article_count\n";
  for (Day d = w.first - 1; !(w.last < d); d = d + 1) {
    Rng rng = Rng::substream(seed, {0x7e5, static_cast<std::uint64_t>(d.serial() - w.first.serial() + 1)});
    news << d.iso() << ',' << rng.poisson(10.0) << '\n';
  }
  write_text(dir / "calendar.csv", cal.str());
  write_text(dir / "news.csv", news.str());

  synth::PanelSpec ps;
  ps.seed = seed;
  std::ostringstream panel;
  synth::write_country_panel(panel, synth::gen_country_panel(ps));
  write_text(dir / "panel.csv", panel.str());
  write_text(dir / "grid.csv",
             "sentiment,active_terror_group,borders_isis,pct_shia,democracy,pct_broadband\n"
             "0.10,1,0,10,5,10\n0.20,1,0,10,5,10\n");

  write_text(dir / "names.csv", "normalized_name,iso2\ncairo,EG\nalexandria,EG\nalexandria,US\nriyadh,SA\nparis,FR\n");
  write_text(dir / "boxes.csv", "iso2,min_lat,min_lon,max_lat,max_lon\nEG,22.0,24.7,31.7,36.9\n");
  write_text(dir / "tz.csv", "offset_minutes_or_name,iso2\n60,FR\n120,EG\n180,SA\n180,IQ\n");
}

}  // namespace detail

inline std::pair<bool, std::string> determinism_check(std::uint64_t seed, unsigned threads) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       ("aggsent-determinism-" + std::to_string(seed) + "-" +
                        std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "-" +
                        std::to_string(reinterpret_cast<std::uintptr_t>(&dir)));
  fs::create_directories(dir);
  struct Cleanup {
    fs::path p;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(p, ec);
    }
  } cleanup{dir};
  detail::write_fixture(dir, seed);
  auto f = [&](const char* name) { return (dir / name).string(); };
  const std::string sd = std::to_string(seed);
  const std::vector<std::string> corpus{"--labels", f("labels.csv"), "--training-docs", f("training.jsonl"),
                                        "--stream", f("stream.jsonl")};
  auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const std::vector<std::pair<std::string, std::vector<std::string>>> cmds{
      {"quantify", with(with({"quantify", "--seed", sd}, corpus), {"--query", f("query.txt")})},
      {"daily-series", with({"daily-series", "--seed", sd}, corpus)},
      {"event-regress",
       {"event-regress", "--seed", sd, "--model", "3", "--series", f("series.csv"), "--calendar", f("calendar.csv"),
        "--news", f("news.csv")}},
      {"ff-model",
       {"ff-model", "--seed", sd, "--panel", f("panel.csv"), "--predict", f("grid.csv"), "--predict-out",
        f("pred.csv")}},
      {"geo-attribute",
       with(with({"geo-attribute", "--seed", sd}, corpus),
            {"--gazetteer", f("names.csv"), "--boxes", f("boxes.csv"), "--timezones", f("tz.csv"), "--min-tweets",
             "50"})},
      {"synth-validate", {"synth-validate", "--seed", sd, "--criteria", "1,4,5,7"}},
  };
  std::string detail;
  bool ok = true;
  for (const auto& [name, argv] : cmds) {
    std::string outputs[3];
    const unsigned th[3] = {1, 1, threads};
    bool failed = false;
    for (int k = 0; k < 3; ++k) {
      auto a = argv;
      a.insert(a.end(), {"--threads", std::to_string(th[k])});
      std::ostringstream o, e;
      const int rc = run(a, o, e);
      outputs[k] = o.str();
      if (name == "ff-model") {
        std::ifstream p(f("pred.csv"), std::ios::binary);
        outputs[k] += std::string(std::istreambuf_iterator<char>(p), {});
      }
      if (rc != 0) {
        failed = true;
        detail += " " + name + " exited " + std::to_string(rc) + " (" + e.str().substr(0, e.str().find('\n')) + ");";
        break;
      }
      if (name == "daily-series" && k == 0) detail::write_text(dir / "series.csv", outputs[0]);
    }
    const bool same = !failed && outputs[0] == outputs[1] && outputs[0] == outputs[2] && !outputs[0].empty();
    if (!failed && !same) detail += " " + name + " differs;";
    ok = ok && same;
  }
  return {ok, ok ? "6 subcommands byte-identical over 2 runs and 1 vs " + std::to_string(threads) + " threads"
                 : "mismatch:" + detail};
}

}  // namespace aggsent::cli
