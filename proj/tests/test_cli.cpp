#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "aggsent/cli/app.hpp"

using namespace aggsent;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = cli::run(args, o, e);
  return {c, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct FixtureDir {
  fs::path dir;
  FixtureDir() : dir(fs::temp_directory_path() / ("aggsent_cli_test_" + std::to_string(::getpid()))) {
    fs::create_directories(dir);
    cli::detail::write_fixture(dir, 3);
  }
  ~FixtureDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

const fs::path& fixture() {
  static const FixtureDir f;
  return f.dir;
}

std::string f(const char* name) { return (fixture() / name).string(); }

std::vector<std::string> corpus_args(const char* cmd) {
  return {cmd, "--labels", f("labels.csv"), "--training-docs", f("training.jsonl"), "--stream", f("stream.jsonl"),
          "--threads", "1"};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("help and usage errors") {
  auto h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("synth-validate") != std::string::npos);
  auto sub = run({"ff-model", "--help"});
  CHECK(sub.code == 0);
  CHECK(sub.out.find("--drop-us") != std::string::npos);

  auto none = run({});
  CHECK(none.code == 2);
  CHECK(none.err.rfind("error: usage: ", 0) == 0);
  CHECK(count_lines(none.err) == 1);

  auto a = corpus_args("quantify");
  a.push_back("--bogus");
  auto bad = run(a);
  CHECK(bad.code == 2);
  CHECK(bad.err.find("--bogus") != std::string::npos);
  CHECK(run({"ff-model", "--panel", f("panel.csv"), "--model", "9"}).code == 2);
}

TEST_CASE("quantify writes a headed CSV") {
  auto a = corpus_args("quantify");
  a.insert(a.end(), {"--no-ci"});
  auto r = run(a);
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# aggsent quantify config_hash=", 0) == 0);
  CHECK(r.out.find("seed=1\ncategory,estimate,ci_low,ci_high\nPositive,") != std::string::npos);
  CHECK(count_lines(r.out) == 6);

  auto again = run(a);
  CHECK(again.out == r.out);
  a.insert(a.end(), {"--seed", "2"});
  auto other = run(a);
  CHECK(other.out.find("seed=2") != std::string::npos);
}

TEST_CASE("quantify with bootstrap intervals") {
  auto a = corpus_args("quantify");
  const auto cfg = fixture() / "small.cfg";
  std::ofstream(cfg) << "bootstrap_reps = 20\nn_subsets = 5\n";
  a.insert(a.end(), {"--config", cfg.string()});
  auto r = run(a);
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  auto t = csv::read_table(in, "out");
  for (const auto& row : t.rows) {
    const double e = std::stod(row.fields[1]), lo = std::stod(row.fields[2]), hi = std::stod(row.fields[3]);
    CHECK(lo <= e);
    CHECK(e <= hi);
  }
}

TEST_CASE("failures are fail-fast with no partial output") {
  const auto out = fixture() / "should_not_exist.csv";
  auto a = corpus_args("quantify");
  a[2] = f("missing_labels.csv");
  a.insert(a.end(), {"--out", out.string()});
  auto r = run(a);
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(count_lines(r.err) == 1);
  CHECK(r.out.empty());
  CHECK_FALSE(fs::exists(out));

  const auto bad = fixture() / "bad.jsonl";
  std::ofstream(bad) << "{\"id\":\"a\",\"timestamp\":\"2014-07-01T00:00:00Z\",\"text\":\"x\"}\n{not json\n";
  auto b = corpus_args("quantify");
  b[6] = bad.string();
  b.insert(b.end(), {"--out", out.string()});
  auto rb = run(b);
  CHECK(rb.code == 1);
  CHECK(rb.err.find("bad.jsonl:2") != std::string::npos);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("daily series feeds the event regression") {
  const auto series = fixture() / "series_test.csv";
  auto d = corpus_args("daily-series");
  d.insert(d.end(), {"--out", series.string()});
  auto r = run(d);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto text = slurp(series);
  CHECK(text.find("date,n_tweets,sentiment,sentiment_deviation,attention_deviation,lowess_sentiment,lowess_attention") !=
        std::string::npos);

  for (const char* model : {"1", "2", "3"}) {
    auto e = run({"event-regress", "--series", series.string(), "--calendar", f("calendar.csv"), "--news", f("news.csv"),
                  "--model", model});
    INFO(e.err);
    REQUIRE(e.code == 0);
    CHECK(e.out.find("name,coef,robust_se,stars") != std::string::npos);
    CHECK(e.out.find("mosque_imam_attack,") != std::string::npos);
    CHECK((e.out.find("news_online_lag,") != std::string::npos) == (std::string(model) == "3"));
  }
  auto no_news = run({"event-regress", "--series", series.string(), "--calendar", f("calendar.csv"), "--model", "3"});
  CHECK(no_news.code == 1);
}

TEST_CASE("ff-model drops the United States") {
  auto all = run({"ff-model", "--panel", f("panel.csv"), "--model", "1"});
  REQUIRE(all.code == 0);
  CHECK(all.out.find("# n=60 ") != std::string::npos);
  auto dropped = run({"ff-model", "--panel", f("panel.csv"), "--model", "3", "--drop-us"});
  REQUIRE(dropped.code == 0);
  CHECK(dropped.out.find("# n=59 ") != std::string::npos);
  CHECK(dropped.out.find("alpha,") != std::string::npos);

  const auto pred = fixture() / "pred_test.csv";
  auto p = run({"ff-model", "--panel", f("panel.csv"), "--predict", f("grid.csv"), "--predict-out", pred.string()});
  REQUIRE(p.code == 0);
  CHECK(slurp(pred).find("predicted") != std::string::npos);
  CHECK(run({"ff-model", "--panel", f("panel.csv"), "--predict", f("grid.csv")}).code != 0);
}

TEST_CASE("geo-attribute reports coverage") {
  auto a = corpus_args("geo-attribute");
  a.insert(a.end(), {"--gazetteer", f("names.csv"), "--boxes", f("boxes.csv"), "--timezones", f("tz.csv"),
                     "--min-tweets", "10"});
  auto r = run(a);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("attribution_rate=") != std::string::npos);
  CHECK(r.out.find("country,n_tweets,sentiment,us_flag") != std::string::npos);
  a.back() = "100000000";
  CHECK(run(a).code == 1);
}

TEST_CASE("synth-validate is reproducible") {
  auto a = run({"synth-validate", "--seed", "7", "--criteria", "1,4,5,7"});
  auto b = run({"synth-validate", "--seed", "7", "--criteria", "1,4,5,7"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# 4/4 passed") != std::string::npos);
  CHECK(a.out.find("seed=7") != std::string::npos);
}

TEST_CASE("installed binary runs") {
  const std::string cmd = std::string(AGGSENT_CLI) + " --help > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string(AGGSENT_CLI) + " no-such-command 2> /dev/null";
  CHECK(std::system(bad.c_str()) != 0);
}
