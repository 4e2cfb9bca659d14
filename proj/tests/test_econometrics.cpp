#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "aggsent/econometrics/country_model.hpp"
#include "aggsent/econometrics/negbin.hpp"
#include "aggsent/econometrics/ols.hpp"
#include "aggsent/econometrics/predict.hpp"
#include "aggsent/synth/oracles.hpp"
#include "aggsent/synth/panel_gen.hpp"
#include "aggsent/synth/validate.hpp"

using namespace aggsent;
using Catch::Approx;

namespace {

Eigen::MatrixXd with_intercept(const std::vector<double>& x) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(x.size()), 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    X(static_cast<Eigen::Index>(i), 1) = x[i];
  }
  return X;
}

}  // namespace

TEST_CASE("OLS exact fit") {
  auto X = with_intercept({0, 1, 2, 3, 4});
  Eigen::VectorXd y = 1.0 + 2.0 * X.col(1).array();
  auto f = ols_fit(y, X, {"const", "x"});
  CHECK(f.coefficients[0] == Approx(1.0).margin(1e-12));
  CHECK(f.coefficients[1] == Approx(2.0).margin(1e-12));
  CHECK(f.residuals.norm() <= 1e-12);
  CHECK(f.robust_se.norm() <= 1e-12);
}

TEST_CASE("OLS four-point fixture") {
  // reference values from statsmodels OLS(...).fit(cov_type="HC1")
  auto X = with_intercept({0, 1, 2, 3});
  Eigen::VectorXd y(4);
  y << 0, 1, 2, 4;
  auto f = ols_fit(y, X, {"const", "x"});
  CHECK(f.coef("x") == Approx(1.3).margin(1e-12));
  CHECK(f.coef("const") == Approx(-0.2).margin(1e-12));
  CHECK(f.se("const") == Approx(0.22978251).margin(1e-8));
  CHECK(f.se("x") == Approx(0.16370706).margin(1e-8));
  CHECK(f.robust_cov(0, 0) == Approx(0.0528).margin(1e-12));
  CHECK(f.robust_cov(0, 1) == Approx(-0.0252).margin(1e-12));
  CHECK(f.robust_cov(1, 1) == Approx(0.0268).margin(1e-12));
  const double rss = f.rss;
  CHECK(rss == Approx(0.3).margin(1e-12));
  REQUIRE(f.bic);
  CHECK(*f.bic == Approx(4.0 * std::log(rss / 4.0) + 2.0 * std::log(4.0)).margin(1e-12));
  CHECK(synth::detail::brute_force_hc1_max_dev() <= 1e-10);
}

TEST_CASE("OLS residuals are orthogonal and HC1 is invariant to column order") {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = 40, p = 4;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, 0) = 1.0;
      for (Eigen::Index j = 1; j < p; ++j) X(i, j) = rng.normal() * (j * 10.0);
      y(i) = X(i, 1) - 0.5 * X(i, 2) + rng.normal() * (1.0 + std::abs(X(i, 1)));
    }
    auto f = ols_fit(y, X, {"c", "a", "b", "d"});
    CHECK((X.transpose() * f.residuals).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, y.norm()));
    Eigen::MatrixXd Xr(n, p);
    Xr << X.col(3), X.col(1), X.col(0), X.col(2);
    auto g = ols_fit(y, Xr, {"d", "a", "c", "b"});
    for (const char* name : {"a", "b", "c", "d"}) {
      CHECK(g.coef(name) == Approx(f.coef(name)).epsilon(1e-10));
      CHECK(g.se(name) == Approx(f.se(name)).epsilon(1e-9));
    }
  }
}

TEST_CASE("OLS errors") {
  auto X = with_intercept({1, 1, 1, 1});
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  CHECK_THROWS_AS(ols_fit(y, X, {"const", "x"}), EstimationError);
  auto X2 = with_intercept({0, 1});
  CHECK_THROWS_AS(ols_fit(y.head(2), X2, {"const", "x"}), EstimationError);
  CHECK_THROWS_AS(ols_fit(y, with_intercept({0, 1, 2, 3}), {"const"}), InputError);
}

TEST_CASE("OLS p-values use Student t") {
  auto X = with_intercept({0, 1, 2, 3});
  Eigen::VectorXd y(4);
  y << 0, 1, 2, 4;
  auto f = ols_fit(y, X, {"const", "x"});
  // t = 1.3 / 0.16370706 on 2 df
  CHECK(f.p_value(1) == Approx(0.0155).margin(5e-4));
  CHECK(f.critical_value(0.95) == Approx(4.302652729911275).epsilon(1e-10));
  CHECK(stars(0.0005) == "***");
  CHECK(stars(0.005) == "**");
  CHECK(stars(0.03) == "*");
  CHECK(stars(0.07) == "+");
  CHECK(stars(0.2).empty());
}

TEST_CASE("negative binomial on the reference instance") {
  // reference: statsmodels NegativeBinomial(loglike_method="nb2", exposure=...) on the same 30 rows
  auto in = synth::negbin_instance(1);
  auto f = negbin_fit(in.counts, in.X, in.exposure, {"const", "x"});
  CHECK(f.converged);
  CHECK_FALSE(f.poisson_limit);
  CHECK(f.coef("const") == Approx(1.44862464).margin(1e-6));
  CHECK(f.coef("x") == Approx(-3.4954654).margin(1e-6));
  REQUIRE(f.alpha);
  CHECK(*f.alpha == Approx(0.20080441).margin(1e-6));
  CHECK(f.loglik == Approx(-32.50270892829337).margin(1e-8));
  // HC0 sandwich times sqrt(n/(n-1))
  const double k = std::sqrt(30.0 / 29.0);
  CHECK(f.se("const") == Approx(0.57098737 * k).margin(1e-5));
  CHECK(f.se("x") == Approx(1.04552432 * k).margin(1e-5));
}

TEST_CASE("negative binomial agrees with the likelihood grid oracle") {
  auto in = synth::negbin_instance(1);
  auto f = negbin_fit(in.counts, in.X, in.exposure, {"const", "x"});
  auto g = synth::oracle_negbin_grid(in.counts, in.X, in.exposure, synth::ParamBox{{-2.0, -6.0, 0.0}, {4.0, 2.0, 3.0}},
                                     0.05);
  CHECK(std::abs(f.coefficients[0] - g.beta[0]) <= 1e-4);
  CHECK(std::abs(f.coefficients[1] - g.beta[1]) <= 1e-4);
  CHECK(std::abs(*f.alpha - g.alpha) <= 1e-4);
  CHECK(g.loglik <= f.loglik + 1e-8);
  CHECK(synth::oracle_nb_loglik(in.counts, in.X, in.exposure, f.coefficients, *f.alpha) ==
        Approx(f.loglik).margin(1e-9));
}

TEST_CASE("exposure rescaling shifts only the intercept") {
  auto in = synth::negbin_instance(2);
  auto f = negbin_fit(in.counts, in.X, in.exposure, {"const", "x"});
  for (double c : {10.0, 0.1, 3.7}) {
    auto e = in.exposure;
    for (double& v : e) v *= c;
    auto g = negbin_fit(in.counts, in.X, e, {"const", "x"});
    CHECK(g.coef("const") == Approx(f.coef("const") - std::log(c)).margin(1e-6));
    CHECK(g.coef("x") == Approx(f.coef("x")).margin(1e-6));
    CHECK(*g.alpha == Approx(*f.alpha).margin(1e-6));
  }
}

TEST_CASE("constant-rate counts reach the Poisson limit") {
  std::vector<double> counts, exposure;
  for (int i = 0; i < 25; ++i) {
    exposure.push_back(1.0 + 0.2 * i);
    counts.push_back(std::round(exposure.back() * std::exp(2.0)));
  }
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(25, 1);
  auto f = negbin_fit(counts, X, exposure, {"const"});
  CHECK(f.coef("const") == Approx(2.0).margin(0.01));
  REQUIRE(f.alpha);
  CHECK(*f.alpha == Approx(0.0).margin(1e-6));
  CHECK(f.poisson_limit);
}

TEST_CASE("negative binomial errors") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(5, 1);
  std::vector<double> zeros(5, 0.0), ones(5, 1.0), frac{1, 2, 0.5, 1, 1};
  CHECK_THROWS_AS(negbin_fit(zeros, X, ones, {"const"}), ConvergenceError);
  CHECK_THROWS_AS(negbin_fit(frac, X, ones, {"const"}), InputError);
  std::vector<double> bad_e{1, 1, 0, 1, 1};
  CHECK_THROWS_AS(negbin_fit(ones, X, bad_e, {"const"}), InputError);
}

TEST_CASE("count predictions") {
  RegressionFit f;
  f.kind = FitKind::NegBin;
  f.names = {"x", "const"};
  f.coefficients.resize(2);
  f.coefficients << -1.5, 0.7;
  auto p = predict_counts(f, {{{"x", 0.0}, {"const", 1.0}}, {{"x", 0.0}}}, 1.0);
  CHECK(p[0] == Approx(std::exp(0.7)));
  CHECK(p[1] == Approx(std::exp(0.7)));
  auto a = predict_counts(f, {{{"x", 0.3}}, {{"x", 0.6}}}, 2.0);
  auto b = predict_counts(f, {{{"x", 0.3}}, {{"x", 0.6}}}, 4.0);
  CHECK(b[0] == Approx(2.0 * a[0]));
  CHECK(a[1] / a[0] == Approx(std::exp(-1.5 * 0.3)));
  CHECK(b[1] / b[0] == Approx(a[1] / a[0]));
  CHECK(a[1] < a[0]);
  CHECK_THROWS_AS(predict_counts(f, {{{"y", 1.0}}}, 1.0), InputError);
  CHECK_THROWS_AS(predict_counts(f, {{{"const", 1.0}}}, 1.0), InputError);
  CHECK_THROWS_AS(predict_counts(f, {{{"x", 1.0}}}, 0.0), InputError);
}

TEST_CASE("fixed country-model coefficients halve predicted fighters") {
  auto f = synth::country_model1_fixed();
  CHECK(f.coef("sentiment") == -8.451);
  CovariateRow base{{"sentiment", 0.10},  {"active_terror_group", 0.0}, {"borders_isis", 0.0},
                    {"pct_shia", 10.0},   {"democracy", 0.0},           {"pct_broadband", 10.0}};
  auto hi = base;
  hi["sentiment"] = 0.20;
  auto p = predict_counts(f, {base, hi}, 30.0);
  CHECK(p[1] / p[0] == Approx(0.4295).margin(1e-4));
  CHECK(p[1] / p[0] < 0.5);
}

TEST_CASE("country panel models") {
  auto panel = synth::gen_country_panel(synth::PanelSpec{});
  std::ostringstream os;
  synth::write_country_panel(os, panel);
  std::istringstream is(os.str());
  auto back = read_country_panel(is, "panel.csv");
  REQUIRE(back.size() == panel.size());
  CHECK(back.back().country == "US");
  CHECK(back[3].sentiment == panel[3].sentiment);

  CountryModelOptions o;
  auto d1 = country_model_data(back, o);
  CHECK(d1.counts.size() == 60);
  CHECK(d1.names.front() == "sentiment");
  o.model = 3;
  auto d3 = country_model_data(back, o);
  CHECK(d3.counts.size() == 59);
  CHECK(std::find(d3.countries.begin(), d3.countries.end(), "US") == d3.countries.end());
  o.model = 2;
  auto d2 = country_model_data(back, o);
  for (const auto& c : d2.countries)
    for (const auto& r : back)
      if (r.country == c) CHECK(*r.n_tweets >= 15000.0);
  o.model = 5;
  auto d5 = country_model_data(back, o);
  CHECK(d5.names == std::vector<std::string>{"justify_attacks", "const"});
  o.model = 4;
  auto d4 = country_model_data(back, o);
  CHECK(d4.counts[0] == *back[0].foreign_fighters_alt);
  o.model = 6;
  CHECK_THROWS_AS(country_model_data(back, o), ConfigError);

  // generator truth is recovered in sign by the fitted first model
  auto big = synth::gen_country_panel(synth::PanelSpec{400, 0.5, synth::PanelSpec{}.beta, 3});
  auto fit = fit_country_model(big, CountryModelOptions{});
  CHECK(fit.coef("sentiment") < 0.0);
  CHECK(std::abs(fit.coef("sentiment") + 8.451) < 3.0 * fit.se("sentiment"));
}

TEST_CASE("panel CSV errors carry the line") {
  std::istringstream missing("country,sentiment\nFR,0.1\n");
  CHECK_THROWS_AS(read_country_panel(missing, "p.csv"), ParseError);
  std::istringstream bad(
      "country,sentiment,foreign_fighters,active_terror_group,borders_isis,pct_shia,democracy,pct_broadband,pct_muslim\n"
      "FR,0.1,5,0,0,1,8,30,7\nDE,x,5,0,0,1,8,30,7\n");
  try {
    read_country_panel(bad, "p.csv");
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("p.csv:3") != std::string::npos);
  }
}
