#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "doctest.h"
#include "gsearch/error.hpp"
#include "gsearch/games.hpp"
#include "gsearch/rng.hpp"

using namespace gsearch;

namespace {

struct Snapshot {
  std::uint64_t key;
  Player mover;
  std::vector<Action> actions;
  bool operator==(const Snapshot&) const = default;
};

Snapshot snap(const Game& g) { return {g.key(), g.mover(), g.actions()}; }

void random_walk_round_trip(Game& g, std::uint64_t seed, int steps) {
  Rng rng(seed);
  std::vector<Snapshot> seen{snap(g)};
  for (int i = 0; i < steps && !g.ended(); ++i) {
    const auto acts = g.actions();
    g.apply(acts[rng.below(acts.size())]);
    seen.push_back(snap(g));
    if (rng.below(3) == 0) {
      g.undo();
      seen.pop_back();
      REQUIRE(snap(g) == seen.back());
    }
  }
  while (seen.size() > 1) {
    g.undo();
    seen.pop_back();
    REQUIRE(snap(g) == seen.back());
  }
}

}  // namespace

TEST_CASE("initial action counts") {
  CHECK(make_game(GameSpec::parse("tictactoe"))->actions().size() == 9);
  CHECK(make_game(GameSpec::parse("breakthrough:6x6"))->actions().size() == 16);
  CHECK(make_game(GameSpec::parse("breakthrough:8x8"))->actions().size() == 22);
  CHECK(make_game(GameSpec::parse("othello:8x8"))->actions().size() == 4);
  CHECK(make_game(GameSpec::parse("hex:7x7"))->actions().size() == 49);
  CHECK(make_game(GameSpec::parse("clobber:5x6"))->actions().size() > 0);
}

TEST_CASE("tictactoe apply, terminal value and notation") {
  auto g = make_game(GameSpec::parse("tictactoe"));
  g->apply({4});
  CHECK(format_position(*g) == "tictactoe:3x3 .../.x./... o");
  CHECK(g->mover() == Player::Second);
  CHECK_THROWS_AS(g->apply({4}), ContractViolation);
  auto won = parse_position("tictactoe:3x3 xxx/oo./... o");
  CHECK(won->ended());
  CHECK(won->terminal_value() == 1);
  CHECK(won->actions().empty());
  auto live = make_game(GameSpec::parse("tictactoe"));
  CHECK_THROWS_AS(live->terminal_value(), ContractViolation);
}

TEST_CASE("undo on a fresh state is an error") {
  for (const char* spec : {"tictactoe", "breakthrough:6x6", "othello:8x8", "hex:5x5", "clobber:5x6"}) {
    auto g = make_game(GameSpec::parse(spec));
    CHECK_THROWS_AS(g->undo(), ContractViolation);
  }
}

TEST_CASE("apply then undo restores key, mover and actions") {
  auto t = make_game(GameSpec::parse("tictactoe"));
  const auto before = snap(*t);
  t->apply({0});
  t->undo();
  CHECK(snap(*t) == before);

  auto b = make_game(GameSpec::parse("breakthrough:6x6"));
  const auto start = b->key();
  Rng rng(20);
  int applied = 0;
  for (; applied < 20 && !b->ended(); ++applied) {
    const auto acts = b->actions();
    b->apply(acts[rng.below(acts.size())]);
  }
  for (int i = 0; i < applied; ++i) b->undo();
  CHECK(b->key() == start);

  for (const char* spec : {"tictactoe", "breakthrough:6x6", "othello:6x6", "hex:5x5:swap", "clobber:4x5"})
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto g = make_game(GameSpec::parse(spec));
      random_walk_round_trip(*g, seed, 200);
    }
}

TEST_CASE("clobber capture relocates the mover and removes the victim") {
  auto g = parse_position("clobber:1x3 xo. x");
  g->apply(Clobber::encode(0, 2));
  CHECK(g->board_string() == ".x.");
  CHECK(g->ended());
  CHECK(g->terminal_value() == 1);
}

TEST_CASE("othello flips bracketed runs and passes explicitly") {
  auto g = make_game(GameSpec::parse("othello:8x8"));
  const auto acts = g->actions();
  g->apply(acts.front());
  auto& o = dynamic_cast<Othello&>(*g);
  CHECK(o.count(Cell::First) == 4);
  CHECK(o.count(Cell::Second) == 1);
  auto pass = parse_position("othello:4x4 xo../..../..../.... o");
  const auto pa = pass->actions();
  REQUIRE(pa.size() == 1);
  CHECK(pa[0] == dynamic_cast<Othello&>(*pass).pass_action());
}

TEST_CASE("othello adjudicates the draw cap by disc difference") {
  auto spec = GameSpec::parse("othello:8x8:cap=6");
  auto g = make_game(spec);
  Rng rng(3);
  while (!g->ended()) {
    const auto acts = g->actions();
    g->apply(acts[rng.below(acts.size())]);
  }
  CHECK(g->ply() == 6);
  const int diff = dynamic_cast<Othello&>(*g).disc_difference();
  CHECK(g->terminal_value() == (diff > 0) - (diff < 0));
}

TEST_CASE("terminal values of the grid games") {
  auto hex = parse_position("hex:3x3 x../x../x.. o");
  CHECK(hex->ended());
  CHECK(hex->terminal_value() == 1);
  auto bt = parse_position("breakthrough:5x5 o..../...../..x../...../..... x");
  CHECK(bt->ended());
  CHECK(bt->terminal_value() == -1);
}

TEST_CASE("hex: every filled board has exactly one connection") {
  for (int mask = 0; mask < 512; ++mask) {
    std::vector<Cell> cells(9);
    for (int i = 0; i < 9; ++i) cells[i] = mask >> i & 1 ? Cell::First : Cell::Second;
    Hex h(3);
    h.load(cells, Player::First);
    REQUIRE(h.connected(Player::First) != h.connected(Player::Second));
  }
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Cell> cells(49);
    for (auto& c : cells) c = rng.below(2) ? Cell::First : Cell::Second;
    Hex h(7);
    h.load(cells, Player::First);
    REQUIRE(h.connected(Player::First) != h.connected(Player::Second));
  }
}

TEST_CASE("hex swap action") {
  auto g = make_game(GameSpec::parse("hex:5x5:swap"));
  auto& h = dynamic_cast<Hex&>(*g);
  g->apply({1});  // (0, 1)
  const auto acts = g->actions();
  CHECK(acts.back() == h.swap_action());
  g->apply(h.swap_action());
  CHECK(h.at(1, 0) == Cell::Second);
  CHECK(h.at(0, 1) == Cell::Empty);
  CHECK(g->mover() == Player::First);
  g->undo();
  CHECK(h.at(0, 1) == Cell::First);
  CHECK(make_game(GameSpec::parse("hex:5x5"))->actions().size() == 25);
}

TEST_CASE("keys: transpositions agree, side to move differs") {
  auto a = parse_position("tictactoe:3x3 x../.o./... x");
  auto b = parse_position("tictactoe:3x3 x../.o./... o");
  CHECK(a->key() != b->key());

  // Othello: breadth-first to depth 4, every repeated (board, mover) must share
  // a key and at least one transposition must exist.
  std::map<std::string, std::uint64_t> keys;
  std::set<std::string> repeated;
  std::function<void(Game&, int)> walk = [&](Game& g, int depth) {
    const std::string pos = format_position(g);
    auto [it, fresh] = keys.emplace(pos, g.key());
    if (!fresh) {
      repeated.insert(pos);
      REQUIRE(it->second == g.key());
    }
    if (depth == 0) return;
    for (Action act : g.actions()) {
      g.apply(act);
      walk(g, depth - 1);
      g.undo();
    }
  };
  auto o = make_game(GameSpec::parse("othello:8x8"));
  walk(*o, 4);
  CHECK(!repeated.empty());
  std::set<std::uint64_t> distinct;
  for (const auto& [pos, key] : keys) distinct.insert(key);
  CHECK(distinct.size() == keys.size());
}

TEST_CASE("zero-sum and deterministic action order") {
  for (const char* spec : {"tictactoe", "breakthrough:5x5", "hex:4x4", "clobber:4x4", "othello:6x6"}) {
    auto g = make_game(GameSpec::parse(spec));
    Rng rng(5);
    while (!g->ended()) {
      const auto acts = g->actions();
      CHECK(acts == g->actions());
      CHECK(std::is_sorted(acts.begin(), acts.end()));
      g->apply(acts[rng.below(acts.size())]);
    }
    const int v = g->terminal_value();
    CHECK((v >= -1 && v <= 1));
    CHECK(relative_value(v, Player::Second) == -v);
  }
}

TEST_CASE("position notation round trip and spec parsing") {
  auto g = make_game(GameSpec::parse("breakthrough:6x6"));
  Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    const auto acts = g->actions();
    g->apply(acts[rng.below(acts.size())]);
  }
  auto copy = parse_position(format_position(*g));
  CHECK(copy->key() == g->key());
  CHECK(copy->actions() == g->actions());
  CHECK(GameSpec::parse("hex:7x7:swap").swap);
  CHECK(GameSpec::parse("othello:8x8:cap=200").draw_cap == 200);
  CHECK(GameSpec::parse("breakthrough").to_string() == "breakthrough:6x6");
  CHECK_THROWS(GameSpec::parse("chess"));
}

TEST_CASE("random trees are deterministic and bounded") {
  RandomTree a(42), b(42);
  CHECK(a.actions() == b.actions());
  CHECK(a.key() == b.key());
  CHECK(a.branching() <= 5);
  CHECK((a.node_value() >= -100 && a.node_value() <= 100));
  random_walk_round_trip(a, 1, 10);
}
