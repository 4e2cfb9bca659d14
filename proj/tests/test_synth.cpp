#include <catch2/catch_amalgamated.hpp>

#include "aggsent/pipeline.hpp"
#include "aggsent/quantifier/classify_count.hpp"
#include "aggsent/synth/corpus_gen.hpp"
#include "aggsent/synth/event_gen.hpp"
#include "aggsent/synth/oracles.hpp"
#include "aggsent/synth/panel_gen.hpp"
#include "aggsent/synth/validate.hpp"

using namespace aggsent;
using Catch::Approx;

namespace {

synth::LanguageModel model3(std::uint64_t seed = 2) {
  synth::MarkerModelSpec ms;
  ms.markers_per_category = 40;
  ms.seed = seed;
  return synth::make_marker_model(ms);
}

const DayWindow kWin{Day(2014, 7, 1), Day(2014, 7, 1) + 29};

}  // namespace

TEST_CASE("language model validation") {
  auto lm = model3();
  CHECK_NOTHROW(lm.validate());
  auto zero = lm;
  std::fill(zero.token_probs[1].begin(), zero.token_probs[1].end(), 0.0);
  CHECK_THROWS_AS(zero.validate(), ConfigError);
  auto ragged = lm;
  ragged.token_probs[0].pop_back();
  CHECK_THROWS_AS(ragged.validate(), ConfigError);
  synth::MarkerModelSpec too_many;
  too_many.vocab_size = 10;
  too_many.markers_per_category = 11;
  CHECK_THROWS_AS(synth::make_marker_model(too_many), ConfigError);
}

TEST_CASE("corpus generator") {
  SECTION("deterministic per seed") {
    synth::GeneratorSpec spec{model3(), {0.3, 0.3, 0.4}, {0.5, 0.2, 0.3}, 200, 300, {}, 5};
    auto a = synth::gen_corpus(spec), b = synth::gen_corpus(spec);
    REQUIRE(a.test.size() == 300);
    CHECK(a.test[17].text == b.test[17].text);
    CHECK(a.train.items[3].doc.text == b.train.items[3].doc.text);
    spec.seed = 6;
    CHECK(synth::gen_corpus(spec).test[17].text != a.test[17].text);
  }
  SECTION("truth is the realized label frequency") {
    synth::GeneratorSpec spec{model3(), {0.3, 0.3, 0.4}, {0.5, 0.2, 0.3}, 10, 999, {}, 7};
    auto c = synth::gen_corpus(spec);
    std::size_t pos = 0;
    for (Category l : c.test_labels) pos += l == Category::Positive;
    CHECK(c.truth[Category::Positive] == Approx(pos / 999.0).epsilon(1e-12));
  }
  SECTION("indicator prior") {
    synth::GeneratorSpec spec{model3(), {0.3, 0.3, 0.4}, {0.0, 1.0, 0.0}, 10, 500, {}, 8};
    auto c = synth::gen_corpus(spec);
    CHECK(c.truth[Category::Negative] == 1.0);
  }
  SECTION("shifted priors at n = 100k") {
    synth::MarkerModelSpec ms;
    ms.categories = {Category::Positive, Category::Negative};
    synth::GeneratorSpec spec{synth::make_marker_model(ms), {0.9, 0.1}, {0.2, 0.8}, 10, 100000, {}, 9};
    auto c = synth::gen_corpus(spec);
    CHECK(std::abs(c.truth[Category::Positive] - 0.2) <= 0.004);
  }
  SECTION("document lengths stay within the cap") {
    synth::GeneratorSpec spec{model3(), {0.3, 0.3, 0.4}, {0.3, 0.3, 0.4}, 10, 2000, {12.0, 40}, 10};
    auto c = synth::gen_corpus(spec);
    double total = 0.0;
    for (const auto& d : c.test) {
      const auto n = static_cast<std::size_t>(std::count(d.text.begin(), d.text.end(), ' ') + (d.text.empty() ? 0 : 1));
      CHECK(n <= 40);
      total += static_cast<double>(n);
    }
    CHECK(total / 2000.0 == Approx(12.0).margin(1.0));
  }
  SECTION("bad priors") {
    synth::GeneratorSpec spec{model3(), {0.5, 0.5}, {0.3, 0.3, 0.4}, 10, 10, {}, 1};
    CHECK_THROWS_AS(synth::gen_corpus(spec), ConfigError);
    spec.train_priors = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(synth::gen_corpus(spec), ConfigError);
  }
}

TEST_CASE("matched priors: quantify and classify-and-count agree") {
  synth::GeneratorSpec spec{model3(12), {0.3, 0.3, 0.4}, {0.3, 0.3, 0.4}, 1600, 20000, {}, 12};
  auto c = synth::gen_corpus(spec);
  PipelineConfig pc;
  pc.quant.rng_seed = 12;
  Pipeline p(c.train, pc);
  auto prof = p.profiles(std::span<const Document>(c.test));
  auto q = p.quantify(prof).distribution;
  auto cc = classify_and_count(prof, p.training_profiles(), q.categories());
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(q.probs()[k] - cc.probs()[k]) <= 0.02);
}

TEST_CASE("event stream generator") {
  synth::GeneratorSpec corpus{model3(), {0.3, 0.3, 0.4}, {0.3, 0.3, 0.4}, 50, 0, {}, 3};
  auto base = [] {
    synth::EventEffectSpec s;
    s.offtopic_share = 0.0;
    return s;
  };
  SECTION("no effects and no noise gives the baseline") {
    auto spec = base();
    spec.docs_per_day = 20;
    spec.effects.clear();
    auto es = synth::gen_event_stream(spec, corpus, kWin);
    REQUIRE(es.truth.size() == 30);
    for (const auto& t : es.truth) CHECK(t.sentiment == 0.25);
    CHECK(es.stream.size() == 600);
    CHECK(es.train.items.size() == 50);
    for (const auto& d : es.stream) CHECK(kWin.contains(d.day()));
  }
  SECTION("a mosque attack dips the truth by the injected effect") {
    auto spec = base();
    spec.docs_per_day = 5;
    spec.calendar.entries.push_back({kWin.first + 4, EventKind::MosqueImamAttack});
    auto es = synth::gen_event_stream(spec, corpus, kWin);
    CHECK(es.truth[4].sentiment == Approx(0.25 - 0.046).margin(1e-15));
    CHECK(es.truth[3].sentiment == 0.25);
  }
  SECTION("heavy clamping rejects the spec") {
    auto spec = base();
    spec.docs_per_day = 1;
    spec.baseline = 0.005;
    CHECK_THROWS_AS(synth::gen_event_stream(spec, corpus, kWin), ConfigError);
  }
  SECTION("calendar outside the window") {
    auto spec = base();
    spec.calendar.entries.push_back({kWin.last + 1, EventKind::MilitaryDefeat});
    CHECK_THROWS_AS(synth::gen_event_stream(spec, corpus, kWin), InputError);
  }
  SECTION("realized sentiment tracks the truth") {
    auto spec = base();
    spec.docs_per_day = 4000;
    spec.noise_sd = 0.02;
    auto es = synth::gen_event_stream(spec, corpus, DayWindow{kWin.first, kWin.first + 4});
    for (const auto& t : es.truth) CHECK(std::abs(t.realized_sentiment - t.sentiment) <= 0.03);
  }
}

TEST_CASE("simplex grid oracle") {
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd y(3);
  y << 0.2, 0.3, 0.5;
  auto r = synth::oracle_simplex_ls(y, I, 1e-3);
  CHECK(r.beta[0] == Approx(0.2).margin(1e-9));
  CHECK(r.beta[1] == Approx(0.3).margin(1e-9));
  CHECK(r.objective == Approx(0.0).margin(1e-12));
  CHECK_THROWS_AS(synth::oracle_simplex_ls(y, I, 1e-2), ConfigError);
  CHECK_THROWS_AS(synth::oracle_simplex_ls(y, I, 3e-4), ConfigError);
  CHECK_THROWS_AS(synth::oracle_simplex_ls(Eigen::VectorXd::Ones(4), Eigen::MatrixXd::Identity(4, 4), 1e-3),
                  ConfigError);
}

TEST_CASE("random simplex instances are well conditioned") {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    auto in = synth::random_simplex_instance(rng);
    CHECK(in.P.cols() >= 2);
    CHECK(in.P.cols() <= 3);
    CHECK(in.P.rows() >= in.P.cols());
    for (Eigen::Index c = 0; c < in.P.cols(); ++c) CHECK(in.P.col(c).sum() == Approx(1.0));
  }
}

TEST_CASE("negative binomial grid oracle") {
  SECTION("underdispersed counts put alpha at the floor") {
    std::vector<double> y, e;
    Eigen::MatrixXd X(60, 1);
    for (int i = 0; i < 60; ++i) {
      X(i, 0) = 1.0;
      e.push_back(1.0);
      y.push_back(2.0 + i % 3);
    }
    auto g = synth::oracle_negbin_grid(y, X, e, synth::ParamBox{{0.0, 0.0}, {2.0, 1.0}}, 0.01);
    CHECK(g.alpha_at_floor);
    CHECK(g.alpha <= 1e-6);
    CHECK(g.beta[0] == Approx(std::log(3.0)).margin(1e-4));
  }
  SECTION("box touching the optimum is an error") {
    auto in = synth::negbin_instance(1);
    CHECK_THROWS_AS(
        synth::oracle_negbin_grid(in.counts, in.X, in.exposure, synth::ParamBox{{-2.0, -1.0, 0.0}, {4.0, 2.0, 3.0}}, 0.05),
        EstimationError);
  }
}

TEST_CASE("country panel generator") {
  auto a = synth::gen_country_panel(synth::PanelSpec{});
  auto b = synth::gen_country_panel(synth::PanelSpec{});
  REQUIRE(a.size() == 60);
  CHECK(a.back().country == "US");
  CHECK(a[10].foreign_fighters == b[10].foreign_fighters);
  for (const auto& r : a) {
    CHECK(r.pct_muslim > 0.0);
    CHECK(r.foreign_fighters >= 0.0);
  }
  synth::PanelSpec bad;
  bad.beta.pop_back();
  CHECK_THROWS_AS(synth::gen_country_panel(bad), ConfigError);
}

TEST_CASE("validation report for the fast criteria") {
  synth::ValidateOptions o;
  o.criteria = {1, 3, 4, 5, 7};
  auto rs = synth::run_validation(o);
  REQUIRE(rs.size() == 5);
  for (const auto& r : rs) {
    INFO(r.detail);
    CHECK(r.pass);
  }
  const auto text = synth::format_report(rs);
  CHECK(text.rfind("PASS criterion 1: ", 0) == 0);
  CHECK(text.find("[") == std::string::npos);
  CHECK(synth::format_report(rs, true).find(" s") != std::string::npos);
  CHECK(synth::format_report(synth::run_validation(o)) == text);

  synth::ValidateOptions missing;
  missing.criteria = {8};
  auto r8 = synth::run_validation(missing);
  REQUIRE(r8.size() == 1);
  CHECK_FALSE(r8[0].pass);
}
