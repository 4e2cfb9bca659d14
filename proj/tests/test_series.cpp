#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aggsent/series/daily.hpp"
#include "aggsent/series/smooth.hpp"
#include "aggsent/synth/corpus_gen.hpp"

using namespace aggsent;
using Catch::Approx;

namespace {

DailySeriesRow row(int day, std::size_t n, double s) {
  DailySeriesRow r;
  r.date = Day(2014, 7, 1) + day;
  r.n_tweets = n;
  r.sentiment = s;
  return r;
}

synth::LanguageModel pnu_model() {
  synth::MarkerModelSpec ms;
  ms.categories = {Category::Positive, Category::Negative, Category::Neutral};
  ms.markers_per_category = 40;
  ms.seed = 17;
  return synth::make_marker_model(ms);
}

// One corpus per day; sentiment s means Positive:Negative = s:(1-s) within 70% of the mass.
struct DayStream {
  TrainingSet train;
  std::vector<Document> stream;
  std::vector<double> truth;
};

DayStream day_stream(const std::vector<double>& sentiments, std::size_t per_day) {
  DayStream out;
  const auto lm = pnu_model();
  for (std::size_t d = 0; d < sentiments.size(); ++d) {
    const double s = sentiments[d];
    synth::GeneratorSpec spec{lm, {0.34, 0.33, 0.33}, {0.7 * s, 0.7 * (1.0 - s), 0.3}, d == 0 ? 2400u : 0u, per_day,
                              {}, 40 + d};
    auto c = synth::gen_corpus(spec);
    if (d == 0) out.train = std::move(c.train);
    for (auto& doc : c.test) {
      doc.id = "d" + std::to_string(d) + "-" + doc.id;
      doc.timestamp = UtcTime{(Day(2014, 7, 1) + static_cast<int>(d)).sys() + std::chrono::hours(12)};
      out.stream.push_back(std::move(doc));
    }
    out.truth.push_back(c.truth[Category::Positive] / (c.truth[Category::Positive] + c.truth[Category::Negative]));
  }
  return out;
}

}  // namespace

TEST_CASE("center") {
  const std::vector<double> x{0.20, 0.30, 0.25};
  auto c = center(x);
  CHECK(c[0] == Approx(-0.05).margin(1e-15));
  CHECK(c[1] == Approx(0.05).margin(1e-15));
  CHECK(c[2] == Approx(0.0).margin(1e-15));
  const std::vector<double> k(7, 3.5);
  for (double v : center(k)) CHECK(v == 0.0);
  Rng rng(3);
  std::vector<double> y(100);
  for (auto& v : y) v = rng.normal() * 1000.0 + 5.0;
  auto cy = center(y);
  CHECK(std::abs(std::accumulate(cy.begin(), cy.end(), 0.0)) <= 1e-9 * 100);
  auto ccy = center(cy);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(ccy[i] == Approx(cy[i]).margin(1e-9));
  CHECK_THROWS_AS(center(std::vector<double>{}), InputError);
}

TEST_CASE("lowess matches a reference implementation") {
  // statsmodels lowess(frac=0.3, it=2, delta=0)
  const std::vector<double> expected{
      -0.0917705763825173, 0.253219940139461,  0.583187487202418,  0.795770608641071,  0.865227972181926,
      0.895413811015998,   0.834467527722387,  0.678784455333842,  0.444783792433351,  0.103516583537471,
      -0.192687111098913,  -0.442814233184717, -0.602647149052285, -0.753701838393257, -0.879602411411771,
      -0.911649855933626,  -0.744324771793755, -0.511405195520386, -0.208240441122662, 0.0857656647490147};
  std::vector<double> x(20), y(20);
  for (int i = 0; i < 20; ++i) {
    x[i] = i;
    y[i] = std::sin(i / 3.0) + (((i * 7) % 5) - 2) * 0.1;
  }
  y[13] += 1.5;
  auto s = lowess(x, y, 0.3, 2);
  for (int i = 0; i < 20; ++i) CHECK(s[i] == Approx(expected[i]).margin(1e-9));
}

TEST_CASE("lowess reproduces lines and constants") {
  std::vector<double> t(30), y(30), k(30, 4.2);
  for (int i = 0; i < 30; ++i) {
    t[i] = i;
    y[i] = 2.0 * i + 1.0;
  }
  for (double frac : {0.07, 0.2, 0.5, 1.0}) {
    auto s = lowess(t, y, frac, 2);
    for (int i = 0; i < 30; ++i) CHECK(s[i] == Approx(y[i]).margin(1e-9));
    auto c = lowess(t, k, frac, 2);
    for (double v : c) CHECK(v == Approx(4.2).margin(1e-12));
  }
}

TEST_CASE("lowess is shift-equivariant") {
  Rng rng(9);
  std::vector<double> t(40), y(40), y2(40);
  for (int i = 0; i < 40; ++i) {
    t[i] = i;
    y[i] = rng.normal();
    y2[i] = y[i] + 7.5;
  }
  auto a = lowess(t, y, 0.3, 2), b = lowess(t, y2, 0.3, 2);
  for (int i = 0; i < 40; ++i) CHECK(b[i] == Approx(a[i] + 7.5).margin(1e-9));
}

TEST_CASE("lowess denoises a sine") {
  int better = 0;
  const int runs = 50;
  for (int r = 0; r < runs; ++r) {
    Rng rng = Rng::substream(21, {static_cast<std::uint64_t>(r)});
    std::vector<double> t(200), y(200), truth(200);
    for (int i = 0; i < 200; ++i) {
      t[i] = i;
      truth[i] = std::sin(i / 20.0);
      y[i] = truth[i] + 0.3 * rng.normal();
    }
    auto s = lowess(t, y, 0.3, 2);
    double e_raw = 0.0, e_s = 0.0;
    for (int i = 0; i < 200; ++i) {
      e_raw += (y[i] - truth[i]) * (y[i] - truth[i]);
      e_s += (s[i] - truth[i]) * (s[i] - truth[i]);
    }
    better += e_s < e_raw;
  }
  CHECK(better == runs);
}

TEST_CASE("lowess input errors") {
  const std::vector<double> two{0, 1};
  CHECK_THROWS_AS(lowess(two, two, 0.5, 2), InputError);
  const std::vector<double> x{0, 1, 2}, unsorted{2, 1, 0};
  CHECK_THROWS_AS(lowess(x, x, 0.0, 2), ConfigError);
  CHECK_THROWS_AS(lowess(unsorted, x, 0.5, 2), InputError);
}

TEST_CASE("weighted and conditioned means") {
  std::vector<DailySeriesRow> rows{row(0, 1, 0.3), row(1, 3, 0.1)};
  CHECK(weighted_mean_sentiment(rows) == Approx(0.15));
  std::vector<DailySeriesRow> eq{row(0, 5, 0.3), row(1, 5, 0.1), row(2, 5, 0.2)};
  CHECK(weighted_mean_sentiment(eq) == Approx(mean_sentiment(eq)));

  std::vector<DailySeriesRow> r3{row(0, 100, 0.30), row(1, 200, 0.25), row(2, 400, 0.10)};
  CHECK(conditioned_mean(r3, 50.0) == Approx(mean_sentiment(r3)));
  CHECK_THROWS_AS(conditioned_mean(r3, 400.0), EstimationError);
  CHECK(volume_threshold(r3, 50.0) == Approx(200.0));
  CHECK(volume_threshold(r3, 90.0) == Approx(360.0));
  CHECK(conditioned_mean(r3, volume_threshold(r3, 50.0)) == Approx(0.10));
}

TEST_CASE("volume-sentiment anticorrelation lowers weighted and conditioned means") {
  Rng rng(31);
  std::vector<DailySeriesRow> rows;
  for (int d = 0; d < 215; ++d) {
    const double volume = std::exp(11.5 + 0.5 * rng.normal());
    const double s = std::clamp(0.25 - 0.08 * (std::log(volume) - 11.5) + 0.02 * rng.normal(), 0.01, 0.99);
    rows.push_back(row(d, static_cast<std::size_t>(volume), s));
  }
  const double m = mean_sentiment(rows);
  CHECK(weighted_mean_sentiment(rows) < m);
  CHECK(conditioned_mean(rows, volume_threshold(rows, 90.0)) < m);
}

TEST_CASE("deviations are exact differences from window means") {
  std::vector<DailySeriesRow> rows{row(0, 120000, 0.2), row(1, 130000, 0.3), row(2, 134000, 0.25)};
  compute_deviations(rows);
  double att = 0.0;
  for (const auto& r : rows) att += r.attention_deviation;
  CHECK(att == Approx(0.0).margin(1e-9));
  CHECK(rows[0].sentiment_deviation == Approx(-0.05));
  CHECK(rows[1].attention_deviation == Approx(2000.0));
  std::vector<DailySeriesRow> one{row(0, 10, 0.4)};
  compute_deviations(one);
  CHECK(one[0].sentiment_deviation == 0.0);
  CHECK(one[0].attention_deviation == 0.0);
}

TEST_CASE("daily aggregation recovers known daily truths") {
  auto ds = day_stream({0.2, 0.25, 0.3}, 20000);
  PipelineConfig pc;
  Pipeline p(ds.train, pc);
  const DayWindow w{Day(2014, 7, 1), Day(2014, 7, 3)};
  auto series = daily_aggregate(ds.stream, p, w);
  REQUIRE(series.rows.size() == 3);
  CHECK(series.skipped.empty());
  for (std::size_t d = 0; d < 3; ++d) {
    CHECK(series.rows[d].n_tweets == 20000);
    CHECK(std::abs(series.rows[d].sentiment - ds.truth[d]) <= 0.03);
  }
  double s = 0.0;
  for (const auto& r : series.rows) s += r.sentiment_deviation;
  CHECK(s == Approx(0.0).margin(1e-12));

  SECTION("stream order does not matter") {
    auto shuffled = ds.stream;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 12345, shuffled.end());
    auto again = daily_aggregate(shuffled, p, w, 3);
    for (std::size_t d = 0; d < 3; ++d) CHECK(again.rows[d].sentiment == series.rows[d].sentiment);
  }
  SECTION("days outside the window and empty days") {
    const DayWindow wide{Day(2014, 6, 30), Day(2014, 7, 2)};
    auto part = daily_aggregate(ds.stream, p, wide);
    CHECK(part.rows.size() == 2);
    REQUIRE(part.skipped.size() == 1);
    CHECK(part.skipped[0].date == Day(2014, 6, 30));
    CHECK(part.skipped[0].n_tweets == 0);
    CHECK(part.outside_window == 20000);
  }
}

TEST_CASE("one-day stream gives a single row with zero deviations") {
  auto ds = day_stream({0.4}, 3000);
  Pipeline p(ds.train, PipelineConfig{});
  auto series = daily_aggregate(ds.stream, p, DayWindow{Day(2014, 7, 1), Day(2014, 7, 1)});
  REQUIRE(series.rows.size() == 1);
  CHECK(series.rows[0].sentiment_deviation == 0.0);
  CHECK(series.rows[0].attention_deviation == 0.0);
}

TEST_CASE("a day without sentiment mass is skipped, not zeroed") {
  auto ds = day_stream({0.3}, 500);
  // day two holds only neutral training texts
  for (std::size_t i = 0; i < ds.train.items.size(); ++i)
    if (ds.train.items[i].label == Category::Neutral) {
      Document d = ds.train.items[i].doc;
      d.id = "n" + std::to_string(i);
      d.timestamp = UtcTime{Day(2014, 7, 2).sys()};
      ds.stream.push_back(d);
    }
  Pipeline p(ds.train, PipelineConfig{});
  auto series = daily_aggregate(ds.stream, p, DayWindow{Day(2014, 7, 1), Day(2014, 7, 2)});
  CHECK(series.rows.size() + series.skipped.size() == 2);
  for (const auto& r : series.rows) CHECK(r.sentiment >= 0.0);
  for (const auto& s : series.skipped) CHECK_FALSE(s.reason.empty());
  CHECK_THROWS_AS(daily_aggregate(ds.stream, p, DayWindow{Day(2014, 7, 2), Day(2014, 7, 1)}), ConfigError);
}
