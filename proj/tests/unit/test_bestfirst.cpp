#include <sstream>

#include "doctest.h"
#include "gsearch/arena.hpp"
#include "gsearch/bestfirst.hpp"
#include "gsearch/engine.hpp"
#include "gsearch/error.hpp"

using namespace gsearch;

namespace {

TtEntry root_with(std::initializer_list<std::tuple<double, std::uint32_t, Resolution>> stats) {
  TtEntry e;
  e.expanded = true;
  std::uint32_t code = 0;
  for (const auto& [v, n, r] : stats) {
    auto st = stats_of({code++});
    st.value = v;
    st.valued = true;
    st.selections = n;
    st.resolution = r;
    e.actions.push_back(st);
  }
  return e;
}

const Resolution U = Resolution::unsolved();

SemiCompletedEval tictactoe_eval() {
  return SemiCompletedEval(make_heuristic_family(GameSpec::parse("tictactoe"), 1, 2).members[0]);
}

std::uint32_t root_count(const TranspositionTable& tt, const Game& g) {
  std::uint32_t n = 0;
  for (const auto& st : tt.probe(g.key())->actions) n += st.selections;
  return n;
}

}  // namespace

TEST_CASE("first iteration expands the root") {
  const auto eval = tictactoe_eval();
  TranspositionTable tt;
  BestFirstSearch search(eval, tt);
  auto g = make_game(GameSpec::parse("tictactoe"));
  search.iterate(*g);
  const TtEntry* root = tt.probe(g->key());
  REQUIRE(root != nullptr);
  CHECK(root->expanded);
  REQUIRE(root->actions.size() == 9);
  std::uint32_t total = 0;
  for (const auto& st : root->actions) {
    CHECK(st.valued);
    total += st.selections;
  }
  CHECK(total == 1);
  CHECK(root->find(decide_best_value(*root, Player::First))->selections == 1);
  CHECK(search.evaluations() == 9);
}

TEST_CASE("an immediate win solves the parent") {
  const auto eval = tictactoe_eval();
  TranspositionTable tt;
  BestFirstSearch search(eval, tt);
  auto g = parse_position("tictactoe:3x3 xx./oo./... x");
  search.iterate(*g);
  CHECK(tt.probe(g->key())->resolution == Resolution::solved(1));
  const auto r = search.search(*g, SearchBudget::nodes(1000), Decision::BestValue);
  CHECK(r.action == Action{2});
  CHECK(r.iterations == 0);
}

TEST_CASE("the solver marks the tictactoe root as a draw") {
  const auto eval = tictactoe_eval();
  TranspositionTable tt;
  BestFirstSearch search(eval, tt);
  auto g = make_game(GameSpec::parse("tictactoe"));
  const auto r = search.search(*g, SearchBudget::nodes(10000000), Decision::Safest);
  CHECK(r.resolution == Resolution::solved(0));
  CHECK(r.iterations < 10000000);
}

TEST_CASE("one iteration decides greedily") {
  const auto spec = GameSpec::parse("breakthrough:6x6");
  SemiCompletedEval eval(make_heuristic_family(spec, 1, 2).members[0]);
  auto g = make_game(spec);
  g->apply(g->actions()[3]);
  TranspositionTable tt;
  BestFirstSearch search(eval, tt);
  const auto r = search.search(*g, SearchBudget::nodes(1), Decision::BestValue);
  Action greedy{};
  double best = -2;
  for (Action a : g->actions()) {
    g->apply(a);
    const double v = relative_value(eval(*g), Player::Second);
    g->undo();
    if (v > best) best = v, greedy = a;
  }
  CHECK(r.action == greedy);
}

TEST_CASE("best-value decision") {
  auto e = root_with({{0.3, 0, U}, {0.8, 0, U}});
  CHECK(decide_best_value(e, Player::First) == Action{1});
  CHECK(decide_best_value(e, Player::Second) == Action{0});
  auto s = root_with({{0.3, 0, U}, {0.8, 0, U}, {0.1, 0, Resolution::solved(1)}});
  CHECK(decide_best_value(s, Player::First) == Action{2});
  CHECK(decide_best_value(s, Player::First, false) == Action{1});
  TtEntry empty;
  CHECK_THROWS(decide_best_value(empty, Player::First));
}

TEST_CASE("safest decision") {
  CHECK(decide_safest(root_with({{0.1, 40, U}, {0.9, 10, U}}), Player::First) == Action{0});
  CHECK(decide_safest(root_with({{0.1, 25, U}, {0.9, 25, U}}), Player::First) == Action{1});
  CHECK(decide_safest(root_with({{0.5, 7, U}, {0.5, 7, U}}), Player::First) == Action{0});
  CHECK(decide_safest(root_with({{0.1, 25, U}, {0.9, 25, U}}), Player::Second) == Action{0});
  const auto lost = root_with({{0.9, 50, Resolution::solved(-1)}, {0.1, 2, U}});
  CHECK(decide_safest(lost, Player::First) == Action{1});
}

TEST_CASE("counts add up and every backup is consistent") {
  const auto spec = GameSpec::parse("breakthrough:6x6");
  SemiCompletedEval eval(make_heuristic_family(spec, 1, 2).members[0]);
  BestFirstOptions o;
  o.audit = true;
  TranspositionTable tt;
  BestFirstSearch search(eval, tt, o);
  auto g = make_game(spec);
  const auto key = g->key();
  for (int i = 1; i <= 400; ++i) {
    search.iterate(*g);
    REQUIRE(root_count(tt, *g) == static_cast<std::uint32_t>(i));
  }
  CHECK(search.audit_failures() == 0);
  CHECK(g->key() == key);
  TtEntry copy = *tt.probe(key);
  const double before = copy.value;
  backup_entry(copy, Player::First);
  CHECK(copy.value == before);
}

TEST_CASE("UBFM and UBFM_s build the same tree") {
  const auto spec = GameSpec::parse("hex:5x5");
  SemiCompletedEval eval(make_heuristic_family(spec, 1, 4).members[0]);
  for (bool random_ties : {false, true}) {
    BestFirstOptions o;
    o.random_ties = random_ties;
    o.tie_seed = 17;
    std::string dumps[2];
    for (int i = 0; i < 2; ++i) {
      TranspositionTable tt;
      BestFirstSearch search(eval, tt, o);
      auto g = make_game(spec);
      search.search(*g, SearchBudget::nodes(800), i ? Decision::Safest : Decision::BestValue);
      std::ostringstream out;
      dump_tree(out, tt);
      dumps[i] = out.str();
    }
    CHECK(!dumps[0].empty());
    CHECK(dumps[0] == dumps[1]);
  }
}

TEST_CASE("best-first engines never lose to the tictactoe oracle") {
  const auto spec = GameSpec::parse("tictactoe");
  const auto family = make_heuristic_family(spec, 1, 2);
  for (const char* name : {"ubfm", "ubfm_s"})
    for (std::uint64_t k = 0; k < 12; ++k) {
      EngineSetup setup;
      setup.game = spec;
      setup.heuristic = std::make_shared<const EvalFn>(family.members[0]);
      setup.seed = k;
      auto engine = make_engine(AlgorithmSpec::parse(name), setup);
      auto oracle = make_engine(AlgorithmSpec::parse("oracle"), setup);
      const auto out = play_match(spec, *engine, *oracle, k % 2 ? Player::Second : Player::First,
                                  SearchBudget::nodes(100000), k);
      CHECK(!out.violation);
      CHECK(out.record.score == 0);
    }
}
