#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "gsearch/error.hpp"
#include "gsearch/rng.hpp"
#include "gsearch/stats.hpp"

using namespace gsearch;

namespace {

Stratum stratum(const std::vector<double>& scores, std::uint64_t first_seed = 0) {
  Stratum s;
  for (std::size_t i = 0; i < scores.size(); ++i) s.push_back({first_seed + i, scores[i]});
  return s;
}

Stratum bernoulli(Rng& rng, std::size_t n, double p_win) {
  Stratum s;
  for (std::size_t i = 0; i < n; ++i) s.push_back({rng(), rng.unit() < p_win ? 1.0 : -1.0});
  return s;
}

}  // namespace

TEST_CASE("game performance") {
  const std::vector<double> wins(50, 1.0);
  const auto p = game_performance(wins);
  CHECK(p.mean == 1.0);
  CHECK(p.radius == 0.0);
  CHECK(p.n == 50);
  std::vector<double> balanced;
  for (int i = 0; i < 500; ++i) {
    balanced.push_back(1);
    balanced.push_back(-1);
  }
  const auto b = game_performance(balanced);
  CHECK(b.mean == 0.0);
  CHECK(b.radius == doctest::Approx(1.96 * std::sqrt(1000.0 / 999.0) / std::sqrt(1000.0)).epsilon(1e-12));
  CHECK(b.radius == doctest::Approx(0.0620116557).epsilon(1e-9));
  const std::vector<double> one{1.0};
  CHECK(game_performance(one).radius == 0.0);
  CHECK_THROWS(game_performance(std::vector<double>{}));
}

TEST_CASE("performance formatting") {
  CHECK(format_performance({0.25, 0.03, 100}) == "25 ± 3");
  CHECK(format_performance({-0.234, 0.026, 100}) == "-23 ± 3");
  CHECK(format_performance({1.0, 0.0, 10}) == "100 ± 0");
}

TEST_CASE("type 7 quantiles") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == 1);
  CHECK(quantile_sorted(v, 1.0) == 4);
  CHECK(quantile_sorted(v, 0.5) == 2.5);
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("bootstrap on degenerate and balanced data") {
  BootstrapOptions o;
  const std::vector<Stratum> wins{stratum(std::vector<double>(40, 1.0)), stratum(std::vector<double>(30, 1.0))};
  const auto ci = stratified_bootstrap_ci(wins, o);
  CHECK(ci.lower == 1.0);
  CHECK(ci.upper == 1.0);

  std::vector<double> b;
  for (int i = 0; i < 1000; ++i) b.push_back(i % 2 ? 1.0 : -1.0);
  const std::vector<Stratum> balanced{stratum(b)};
  const auto bc = stratified_bootstrap_ci(balanced, o);
  CHECK(bc.lower <= 0);
  CHECK(bc.upper >= 0);
  CHECK(std::abs(bc.lower + bc.upper) <= 0.005);

  const std::vector<Stratum> with_empty{stratum(b), Stratum{}};
  CHECK_THROWS(stratified_bootstrap_ci(with_empty, o));
  BootstrapOptions none = o;
  none.replicates = 0;
  CHECK_THROWS(stratified_bootstrap_ci(balanced, none));
}

TEST_CASE("statistic: mean of per-stratum means or pooled mean") {
  const std::vector<Stratum> s{stratum({1, 1, 1, 1}), stratum({-1, 1})};
  CHECK(stratified_statistic(s) == doctest::Approx(0.5));
  CHECK(stratified_statistic(s, true) == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("bootstrap interval contains the point estimate") {
  Rng rng(12);
  BootstrapOptions o;
  o.replicates = 1000;
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<Stratum> s{bernoulli(rng, 60, 0.3 + 0.01 * trial), bernoulli(rng, 40, 0.6)};
    o.seed = static_cast<std::uint64_t>(trial);
    const auto ci = stratified_bootstrap_ci(s, o);
    const double point = stratified_statistic(s);
    CHECK(ci.lower <= point);
    CHECK(point <= ci.upper);
  }
}

TEST_CASE("coverage of the balanced bernoulli case") {
  Rng rng(31);
  BootstrapOptions o;
  o.replicates = 1000;
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<Stratum> s{bernoulli(rng, 100, 0.5)};
    o.seed = static_cast<std::uint64_t>(trial);
    const auto ci = stratified_bootstrap_ci(s, o);
    covered += ci.lower <= 0 && 0 <= ci.upper;
  }
  CHECK(covered >= 90);
}

TEST_CASE("permuting a stratum leaves the interval unchanged") {
  Rng rng(4);
  Stratum s = bernoulli(rng, 80, 0.4);
  BootstrapOptions o;
  o.replicates = 2000;
  const std::vector<Stratum> a{s};
  const auto ca = stratified_bootstrap_ci(a, o);
  std::reverse(s.begin(), s.end());
  std::swap(s[3], s[40]);
  const std::vector<Stratum> b{s};
  const auto cb = stratified_bootstrap_ci(b, o);
  CHECK(ca.lower == cb.lower);
  CHECK(ca.upper == cb.upper);
}

TEST_CASE("report emission") {
  Report empty;
  CHECK(emit_report(empty, "csv") == "algorithm,mean,lower,upper\n");
  const auto md = emit_report(empty, "md");
  CHECK(md.find("algorithm") != std::string::npos);
  CHECK(std::count(md.begin(), md.end(), '\n') == 2);

  Report r;
  r.games = {"breakthrough:6x6", "hex:7x7"};
  r.rows.push_back({"ubfm_s", 8.64, 8.06, 9.23, {Performance{0.25, 0.03, 100}, Performance{-0.08, 0.1, 100}}});
  CHECK(emit_report(r, "csv") ==
        "algorithm,mean,lower,upper,breakthrough:6x6,hex:7x7\nubfm_s,8.64,8.06,9.23,25 ± 3,-8 ± 10\n");
  const auto table = emit_report(r, "md");
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);
  CHECK(table.find("| 25 ± 3 ") != std::string::npos);
  CHECK_THROWS_AS(emit_report(r, "html"), ConfigError);
}

TEST_CASE("star row takes the best grid value per game") {
  Report r;
  r.games = {"a", "b"};
  r.rows.push_back({"mcts:C=1", 10.0, 5.0, 15.0, {Performance{0.3, 0.1, 10}, Performance{-0.1, 0.1, 10}}});
  r.rows.push_back({"mcts:C=0.3", 0.0, -5.0, 5.0, {Performance{0.1, 0.1, 10}, Performance{0.2, 0.1, 10}}});
  const auto star = star_row(r);
  CHECK(star.algorithm == "*");
  CHECK(star.per_game[0]->mean == 0.3);
  CHECK(star.per_game[1]->mean == 0.2);
  CHECK(*star.mean == doctest::Approx(25.0));
  CHECK(!star.lower.has_value());
}
