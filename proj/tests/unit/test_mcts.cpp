#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gsearch/error.hpp"
#include "gsearch/mcts.hpp"
#include "gsearch/verify.hpp"

using namespace gsearch;

namespace {

class ConstantEval final : public Evaluator {
 public:
  explicit ConstantEval(double c) : c_(c) {}
  double operator()(const Game&) const override { return c_; }

 private:
  double c_;
};

TtEntry visited(std::initializer_list<std::tuple<double, std::uint32_t, Resolution>> stats) {
  TtEntry e;
  std::uint32_t code = 0;
  for (const auto& [w, n, r] : stats) {
    auto st = stats_of({code++});
    st.wins = w;
    st.visits = n;
    st.resolution = r;
    e.actions.push_back(st);
  }
  return e;
}

std::uint64_t total_visits(const TtEntry& e) {
  std::uint64_t n = 0;
  for (const auto& st : e.actions) n += st.visits;
  return n;
}

const Resolution U = Resolution::unsolved();

}  // namespace

TEST_CASE("uct score") {
  CHECK(uct_score(1, 1, 1, 1.0) == 1.0);
  CHECK(uct_score(0, 1, 7, 1.0) == doctest::Approx(std::sqrt(std::log(7.0))));
  CHECK(uct_score(3, 4, 10, std::numbers::sqrt2) ==
        doctest::Approx(0.75 + std::numbers::sqrt2 * std::sqrt(std::log(10.0) / 4)));
  CHECK(uct_score(2, 4, 9, 0.0) == 0.5);
  CHECK_THROWS(uct_score(0, 0, 1, 1.0));
  CHECK_THROWS(uct_score(0, 5, 4, 1.0));
}

TEST_CASE("random rollout rewards") {
  Rng rng(1);
  auto won = parse_position("tictactoe:3x3 xxx/oo./... x");
  CHECK(random_rollout(*won, rng) == 1.0);
  auto lost = parse_position("tictactoe:3x3 xxx/oo./... o");
  CHECK(random_rollout(*lost, rng) == 0.0);
  auto drawn = parse_position("tictactoe:3x3 xox/xoo/oxx x");
  CHECK(random_rollout(*drawn, rng) == 0.5);
}

TEST_CASE("random rollouts from the empty board match the exact expectation") {
  // Uniformly random play from the empty board: first player wins 737/1260,
  // draws 160/1260, so the expected reward is 817/1260.
  const double expected = 817.0 / 1260.0;
  auto g = make_game(GameSpec::parse("tictactoe"));
  const auto key = g->key();
  Rng rng(2024);
  const int n = 10000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += random_rollout(*g, rng);
  const double mean = sum / n;
  CHECK(g->key() == key);
  CHECK(mean >= 0.5);
  CHECK(std::abs(mean - expected) <= 4 * 0.45 / std::sqrt(n));
}

TEST_CASE("heuristic rollout") {
  const EvalRange unit{1.0, -1.0, 1};
  const auto family = make_heuristic_family(GameSpec::parse("tictactoe"), 1, 2);
  SemiCompletedEval eval(family.members[0]);
  CHECK(heuristic_rollout(eval, unit, *parse_position("tictactoe:3x3 xxx/oo./... x")) == 1.0);
  CHECK(heuristic_rollout(eval, unit, *parse_position("tictactoe:3x3 xxx/oo./... o")) == 0.0);
  const ConstantEval zero(0);
  CHECK(heuristic_rollout(zero, unit, *make_game(GameSpec::parse("tictactoe"))) == 0.5);
  auto g = make_game(GameSpec::parse("tictactoe"));
  g->apply({4});
  auto h = make_game(GameSpec::parse("tictactoe"));
  h->apply({1});
  const double fa = relative_value(eval(*g), Player::Second);
  const double fb = relative_value(eval(*h), Player::Second);
  const double ra = heuristic_rollout(eval, unit, *g);
  const double rb = heuristic_rollout(eval, unit, *h);
  CHECK((fa < fb) == (ra < rb));
  CHECK((fa > fb) == (ra > rb));
}

TEST_CASE("decision by visits, then mean, then solver overlay") {
  CHECK(mcts_decide(visited({{500, 900, U}, {90, 100, U}}), Player::First) == Action{0});
  CHECK(mcts_decide(visited({{10, 50, U}, {30, 50, U}}), Player::First) == Action{1});
  CHECK(mcts_decide(visited({{10, 50, U}, {10, 50, U}}), Player::First) == Action{0});
  const auto losing = visited({{500, 900, Resolution::solved(-1)}, {10, 100, U}});
  CHECK(mcts_decide(losing, Player::First) == Action{1});
  CHECK(mcts_decide(losing, Player::First, false) == Action{0});
  CHECK_THROWS(mcts_decide(visited({{0, 0, U}}), Player::First));
}

TEST_CASE("every root child is tried once before any is repeated") {
  auto g = make_game(GameSpec::parse("breakthrough:6x6"));
  const auto n = g->actions().size();
  TranspositionTable tt;
  MctsOptions o;
  o.seed = 4;
  MonteCarloSearch search(tt, o);
  search.search(*g, SearchBudget::nodes(n));
  const TtEntry* root = tt.probe(g->key());
  REQUIRE(root != nullptr);
  REQUIRE(root->actions.size() == n);
  for (const auto& st : root->actions) CHECK(st.visits == 1);
}

TEST_CASE("each iteration adds one visit along the path") {
  auto g = make_game(GameSpec::parse("hex:4x4"));
  TranspositionTable tt;
  MctsOptions o;
  o.seed = 8;
  MonteCarloSearch search(tt, o);
  for (int i = 1; i <= 300; ++i) {
    search.iterate(*g);
    REQUIRE(total_visits(*tt.probe(g->key())) == static_cast<std::uint64_t>(i));
  }
  // Per-state visits: every entry's total equals the visits of its incoming
  // edges, except the root which counts the iterations.
  std::uint64_t child_visits = 0;
  const TtEntry* root = tt.probe(g->key());
  for (const auto& st : root->actions) {
    if (!st.visits) continue;
    g->apply(st.action);
    if (const TtEntry* c = tt.probe(g->key()); c && !g->ended()) {
      const auto t = total_visits(*c);
      CHECK(t + 1 == st.visits);
      child_visits += t;
    }
    g->undo();
  }
  CHECK(child_visits > 0);
}

TEST_CASE("same seed, same statistics") {
  auto g = make_game(GameSpec::parse("breakthrough:6x6"));
  std::vector<std::pair<double, std::uint32_t>> stats[2];
  for (int i = 0; i < 2; ++i) {
    TranspositionTable tt;
    MctsOptions o;
    o.seed = 99;
    MonteCarloSearch search(tt, o);
    search.search(*g, SearchBudget::nodes(2000));
    for (const auto& st : tt.probe(g->key())->actions) stats[i].emplace_back(st.wins, st.visits);
  }
  CHECK(stats[0] == stats[1]);
}

TEST_CASE("MCTS concentrates on optimal replies") {
  // After x takes the centre, only the corners hold the draw for o.
  auto g = parse_position("tictactoe:3x3 .../.x./... o");
  const verify::TicTacToeOracle oracle;
  int optimal = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TranspositionTable tt;
    MctsOptions o;
    o.seed = seed;
    MonteCarloSearch search(tt, o);
    const auto r = search.search(*g, SearchBudget::nodes(50000));
    g->apply(r.action);
    optimal += *oracle.value(g->key()) == 0;
    g->undo();
  }
  CHECK(optimal >= 19);
}

TEST_CASE("heuristic MCTS needs an evaluator") {
  TranspositionTable tt;
  MctsOptions o;
  o.rollout = Rollout::Heuristic;
  CHECK_THROWS(MonteCarloSearch(tt, o));
}
