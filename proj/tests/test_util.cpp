#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <set>
#include <sstream>

#include "aggsent/util/csv.hpp"
#include "aggsent/util/date.hpp"
#include "aggsent/util/hash.hpp"
#include "aggsent/util/parallel.hpp"
#include "aggsent/util/random.hpp"
#include "aggsent/util/stats.hpp"

using namespace aggsent;
using Catch::Approx;

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("day parsing and arithmetic") {
  auto d = parse_day("2014-08-19");
  REQUIRE(d);
  CHECK(d->iso() == "2014-08-19");
  CHECK((*d + 13).iso() == "2014-09-01");
  CHECK((Day(2015, 3, 1) - Day(2015, 2, 1)) == 28);
  CHECK_FALSE(parse_day("2014-02-30"));
  CHECK_FALSE(parse_day("2014-8-19"));
  CHECK_FALSE(parse_day("yesterday"));
}

TEST_CASE("timestamps are mapped to UTC days") {
  auto t = parse_timestamp("2014-07-01T23:30:00-02:00");
  REQUIRE(t);
  CHECK(utc_day(*t).iso() == "2014-07-02");
  CHECK(iso_timestamp(*t) == "2014-07-02T01:30:00Z");
  auto u = parse_timestamp("2014-07-01T00:10:00.123+01:00");
  REQUIRE(u);
  CHECK(utc_day(*u).iso() == "2014-06-30");
  CHECK(parse_timestamp("2014-07-01"));
  CHECK_FALSE(parse_timestamp("2014-07-01T25:00:00Z"));
  CHECK_FALSE(parse_timestamp("2014-07-01T10:00:00+0100"));
}

TEST_CASE("csv reader handles quoting and reports lines") {
  std::istringstream in("a,b\n\"x,1\",\"he said \"\"hi\"\"\"\n\n\"multi\nline\",2\n3,4\n");
  auto t = csv::read_table(in, "t.csv");
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].fields[0] == "x,1");
  CHECK(t.rows[0].fields[1] == "he said \"hi\"");
  CHECK(t.rows[1].fields[0] == "multi\nline");
  CHECK(t.rows[2].line == 6);
  CHECK(t.require("b") == 1);
  CHECK_THROWS_AS(t.require("c"), ParseError);

  std::istringstream bad("a,b\n1,2,3\n");
  try {
    csv::read_table(bad, "bad.csv");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("bad.csv:2") == 0);
  }
}

TEST_CASE("csv writing round-trips") {
  std::ostringstream os;
  csv::write_row(os, {"plain", "with,comma", "with \"quote\"", ""});
  std::istringstream in("h1,h2,h3,h4\n" + os.str());
  auto t = csv::read_table(in, "rt");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].fields == std::vector<std::string>{"plain", "with,comma", "with \"quote\"", ""});
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125})
    CHECK(csv::to_double(csv::fmt(v), "x", 1) == v);
  CHECK_THROWS_AS(csv::to_double("1.5x", "x", 1), ParseError);
  CHECK_THROWS_AS(csv::to_int("7.0", "x", 1), ParseError);
}

TEST_CASE("rng substreams are reproducible and distinct") {
  auto a = Rng::substream(7, {1, 2}), b = Rng::substream(7, {1, 2}), c = Rng::substream(7, {2, 1});
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
    seen.insert(x);
    seen.insert(c.next_u64());
  }
  CHECK(seen.size() == 200);
}

TEST_CASE("rng distribution moments") {
  Rng r(42);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sg = 0, sp = 0, snb = 0, snb2 = 0;
  for (int i = 0; i < n; ++i) {
    su += r.uniform();
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
    sg += r.gamma(2.5);
    sp += static_cast<double>(r.poisson(30.0));
    const double k = static_cast<double>(r.negbin(4.0, 0.5));
    snb += k;
    snb2 += k * k;
  }
  CHECK(su / n == Approx(0.5).margin(0.005));
  CHECK(sn / n == Approx(0.0).margin(0.01));
  CHECK(sn2 / n == Approx(1.0).margin(0.02));
  CHECK(sg / n == Approx(2.5).margin(0.03));
  CHECK(sp / n == Approx(30.0).margin(0.1));
  const double m = snb / n;
  CHECK(m == Approx(4.0).margin(0.05));
  CHECK(snb2 / n - m * m == Approx(4.0 + 0.5 * 16.0).margin(0.3));  // NB2 variance
}

TEST_CASE("below is unbiased over a small range") {
  Rng r(3);
  std::array<int, 3> c{};
  for (int i = 0; i < 30000; ++i) ++c[r.below(3)];
  for (int x : c) CHECK(x == Approx(10000).margin(400));
}

TEST_CASE("parallel_for visits each index once for any thread count") {
  for (unsigned th : {1u, 2u, 7u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), th, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(50, 4,
                               [](std::size_t i) {
                                 if (i == 17) throw InputError("boom");
                               }),
                  InputError);
}

TEST_CASE("empirical quantile uses linear interpolation") {
  std::vector<double> v{4, 1, 3, 2};
  CHECK(empirical_quantile(v, 0.0) == 1.0);
  CHECK(empirical_quantile(v, 1.0) == 4.0);
  CHECK(empirical_quantile(v, 0.5) == Approx(2.5));
  CHECK(empirical_quantile(v, 0.9) == Approx(3.7));
}
