#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "aggsent/geo/attribute.hpp"
#include "aggsent/geo/gazetteer.hpp"
#include "aggsent/geo/panel.hpp"
#include "aggsent/quantifier/sentiment.hpp"
#include "aggsent/synth/corpus_gen.hpp"
#include "aggsent/synth/validate.hpp"

using namespace aggsent;
using Catch::Approx;

namespace {

std::ifstream data_file(const char* name) {
  std::ifstream in(std::string(AGGSENT_DATA_DIR) + "/" + name);
  REQUIRE(in);
  return in;
}

// Three countries, each tagged through a different tier, with known sentiment shares.
struct GeoStream {
  TrainingSet train;
  std::vector<Document> stream;
  std::map<CountryCode, double> truth;
};

GeoStream geo_stream(std::size_t per_country) {
  synth::MarkerModelSpec ms;
  ms.categories = {Category::Positive, Category::Negative, Category::Neutral};
  ms.markers_per_category = 40;
  ms.seed = 71;
  const auto lm = synth::make_marker_model(ms);
  GeoStream out;
  const std::vector<std::pair<CountryCode, double>> countries{{"EG", 0.10}, {"FR", 0.25}, {"SA", 0.40}};
  for (std::size_t k = 0; k < countries.size(); ++k) {
    const auto& [c, s] = countries[k];
    synth::GeneratorSpec spec{lm, {0.34, 0.33, 0.33}, {0.7 * s, 0.7 * (1.0 - s), 0.3}, k == 0 ? 2400u : 0u,
                              per_country, {}, 90 + k};
    auto corpus = synth::gen_corpus(spec);
    if (k == 0) out.train = std::move(corpus.train);
    for (auto& d : corpus.test) {
      d.id = c + "-" + d.id;
      if (c == "EG") d.geo = GeoPoint{30.0, 31.2};
      if (c == "FR") d.user_location = "Paris";
      if (c == "SA") d.time_zone = "Riyadh";
      out.stream.push_back(std::move(d));
    }
    out.truth[c] = corpus.truth[Category::Positive] / (corpus.truth[Category::Positive] + corpus.truth[Category::Negative]);
  }
  // unresolvable noise
  for (int i = 0; i < 500; ++i) {
    Document d = out.stream[static_cast<std::size_t>(i)];
    d.id = "x" + std::to_string(i);
    d.geo.reset();
    d.utc_offset = 180;
    out.stream.push_back(std::move(d));
  }
  return out;
}

}  // namespace

TEST_CASE("tier precedence fixtures") {
  auto f = synth::geo_fixture();
  for (const auto& c : synth::geo_cases()) {
    INFO(c.label);
    auto a = attribute_country(c.doc, f.gz, f.tz);
    CHECK(a.tier == c.tier);
    CHECK(a.country == c.country);
    CHECK(a.country.has_value() == (a.tier != GeoTier::Unresolved));
  }
}

TEST_CASE("adding coordinates never lowers the tier") {
  auto f = synth::geo_fixture();
  for (const auto& c : synth::geo_cases()) {
    auto d = c.doc;
    d.geo = GeoPoint{26.0, 45.0};  // inside the SA box
    auto a = attribute_country(d, f.gz, f.tz);
    CHECK(a.tier == GeoTier::Coordinates);
    CHECK(static_cast<int>(a.tier) <= static_cast<int>(c.tier));
  }
}

TEST_CASE("profile matching is normalized and phrase based") {
  auto f = synth::geo_fixture();
  CHECK(f.gz.match_location("PARIS!!") == std::set<CountryCode>{"FR"});
  CHECK(f.gz.match_location("new   york") == std::set<CountryCode>{"US"});
  CHECK(f.gz.match_location("york").empty());
  CHECK(f.gz.match_location("Paris / Cairo") == std::set<CountryCode>{"EG", "FR"});
  CHECK(f.gz.match_location("parisian").empty());
}

TEST_CASE("attribution rate on the 45 of 100 fixture") {
  auto f = synth::geo_fixture();
  auto docs = synth::attribution_fixture();
  std::size_t n = 0;
  for (const auto& d : docs) n += attribute_country(d, f.gz, f.tz).country.has_value();
  CHECK(n == 45);
  CHECK(static_cast<double>(n) / docs.size() == 0.45);
}

TEST_CASE("shipped data files load") {
  Gazetteer gz;
  auto names = data_file("gazetteer_names.csv");
  read_gazetteer_names(gz, names, "gazetteer_names.csv");
  auto boxes = data_file("country_boxes.csv");
  read_gazetteer_boxes(gz, boxes, "country_boxes.csv");
  auto tzf = data_file("timezones.csv");
  auto tz = read_timezones(tzf, "timezones.csv");

  CHECK(gz.match_location("Riyadh") == std::set<CountryCode>{"SA"});
  CHECK(gz.match_location("الرياض") == std::set<CountryCode>{"SA"});
  CHECK(gz.match_location("عمان").size() == 2);
  CHECK(gz.locate(GeoPoint{24.7, 46.7}) == CountryCode("SA"));
  CHECK(gz.locate(GeoPoint{30.04, 31.24}) == CountryCode("EG"));
  CHECK(gz.locate(GeoPoint{25.3, 51.5}) == CountryCode("QA"));
  CHECK_FALSE(gz.locate(GeoPoint{-45.0, -150.0}));
  REQUIRE(tz.by_offset(180));
  CHECK(tz.by_offset(180)->size() > 1);
  REQUIRE(tz.by_name("Eastern Time (US & Canada)"));
  CHECK(*tz.by_name("Eastern Time (US & Canada)") == std::set<CountryCode>{"US"});
}

TEST_CASE("gazetteer file errors") {
  Gazetteer gz;
  std::istringstream bad_iso("normalized_name,iso2\nparis,FRA\n");
  CHECK_THROWS_AS(read_gazetteer_names(gz, bad_iso, "n.csv"), ParseError);
  std::istringstream bad_box("iso2,min_lat,min_lon,max_lat,max_lon\nFR,50,0,40,10\n");
  CHECK_THROWS_AS(read_gazetteer_boxes(gz, bad_box, "b.csv"), ParseError);
}

TEST_CASE("country panel recovers per-country sentiment") {
  auto gs = geo_stream(15000);
  auto f = synth::geo_fixture();
  Pipeline p(gs.train, PipelineConfig{});
  auto panel = country_panel(gs.stream, p, f.gz, f.tz, CountryPanelOptions{1001, false});
  REQUIRE(panel.rows.size() == 3);
  CHECK(panel.n_documents == 45500);
  CHECK(panel.n_attributed == 45000);
  CHECK(panel.tier_counts[static_cast<std::size_t>(GeoTier::Coordinates)] == 15000);
  CHECK(panel.tier_counts[static_cast<std::size_t>(GeoTier::ProfileLocation)] == 15000);
  CHECK(panel.tier_counts[static_cast<std::size_t>(GeoTier::TimeZone)] == 15000);
  CHECK(panel.tier_counts[static_cast<std::size_t>(GeoTier::Unresolved)] == 500);
  for (const auto& r : panel.rows) {
    INFO(r.country);
    CHECK(r.n_tweets == 15000);
    CHECK(std::abs(r.sentiment - gs.truth.at(r.country)) <= 0.03);
  }

  SECTION("panel sentiment equals quantify on that country's documents") {
    std::vector<Document> fr;
    for (const auto& d : gs.stream)
      if (d.user_location == "Paris") fr.push_back(d);
    std::sort(fr.begin(), fr.end(), [](const Document& a, const Document& b) { return a.id < b.id; });
    auto prof = p.profiles(std::span<const Document>(fr));
    const double direct = sentiment_ratio(p.quantify(prof).distribution);
    CHECK(panel.rows[1].country == "FR");
    CHECK(panel.rows[1].sentiment == direct);
  }
  SECTION("thresholds") {
    auto none = [&](std::size_t m) { return country_panel(gs.stream, p, f.gz, f.tz, CountryPanelOptions{m, false}); };
    CHECK_THROWS_AS(none(15001), EstimationError);
    CHECK_THROWS_AS(none(0), ConfigError);
  }
}

TEST_CASE("US rows are flagged and optionally dropped") {
  auto gs = geo_stream(1500);
  for (std::size_t i = 0; i < 1200; ++i) {
    gs.stream[i].geo.reset();
    gs.stream[i].user_location = "new york";
  }
  auto f = synth::geo_fixture();
  Pipeline p(gs.train, PipelineConfig{});
  auto kept = country_panel(gs.stream, p, f.gz, f.tz, CountryPanelOptions{1000, false});
  bool us = false;
  for (const auto& r : kept.rows)
    if (r.country == "US") us = r.us_flag;
  CHECK(us);
  auto dropped = country_panel(gs.stream, p, f.gz, f.tz, CountryPanelOptions{1000, true});
  for (const auto& r : dropped.rows) CHECK(r.country != "US");
  CHECK(dropped.skipped.count("US") == 1);
  CHECK(dropped.rows.size() + 1 == kept.rows.size());
}
