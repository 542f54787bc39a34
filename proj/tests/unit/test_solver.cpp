#include "doctest.h"
#include "gsearch/solver.hpp"

using namespace gsearch;

namespace {

const Resolution U = Resolution::unsolved();
Resolution S(int v) { return Resolution::solved(v); }

Candidate cand(std::uint32_t code, Resolution r, double v, std::uint64_t n = 0) {
  return {{code}, r, v, n, 0};
}

}  // namespace

TEST_CASE("update_resolution") {
  const std::vector<Resolution> win{U, S(1), S(-1)};
  CHECK(update_resolution(Player::First, win, false) == S(1));
  const std::vector<Resolution> all{S(0), S(-1)};
  CHECK(update_resolution(Player::First, all, true) == S(0));
  CHECK(update_resolution(Player::First, all, false) == U);
  const std::vector<Resolution> open{S(-1), U};
  CHECK(update_resolution(Player::First, open, true) == U);
  CHECK(update_resolution(Player::Second, open, false) == S(-1));
  const std::vector<Resolution> draws{S(0), S(1)};
  CHECK(update_resolution(Player::Second, draws, true) == S(0));
  CHECK(update_resolution(Player::First, std::vector<Resolution>{}, true) == U);
}

TEST_CASE("filter_decision") {
  const std::vector<Candidate> win{cand(0, U, 0.9), cand(1, S(1), 0.1), cand(2, U, 0.5)};
  CHECK(filter_decision(win, Player::First, best_value_rule) == Action{1});

  const std::vector<Candidate> lost{cand(0, S(-1), 0.2), cand(1, S(-1), 0.7)};
  CHECK(filter_decision(lost, Player::First, best_value_rule) == Action{1});

  const std::vector<Candidate> forced{cand(0, S(-1), 0.9), cand(1, S(0), -0.5), cand(2, S(-1), 0.8)};
  CHECK(filter_decision(forced, Player::First, best_value_rule) == Action{1});

  const std::vector<Candidate> plain{cand(0, U, 0.2), cand(1, U, 0.7), cand(2, U, 0.7)};
  CHECK(filter_decision(plain, Player::First, best_value_rule) == Action{1});

  const std::vector<Candidate> avoid{cand(0, S(1), 0.9), cand(1, U, 0.1)};
  CHECK(filter_decision(avoid, Player::Second, best_value_rule) == Action{1});
}

TEST_CASE("base rules") {
  const std::vector<Candidate> c{cand(0, U, 0.1, 40), cand(1, U, 0.9, 10)};
  CHECK(best_value_rule(c) == 1);
  CHECK(most_selected_rule(c) == 0);
  const std::vector<Candidate> tied{cand(0, U, 0.1, 25), cand(1, U, 0.9, 25)};
  CHECK(most_selected_rule(tied) == 1);
  CHECK(prefer_rule({1})(c) == 1);
  CHECK(prefer_rule({7})(c) == 1);
}

TEST_CASE("a solved draw competes with unsolved actions through the base rule") {
  const std::vector<Candidate> c{cand(0, S(0), 0.0, 30), cand(1, U, 0.6, 12), cand(2, S(-1), 0.9, 50)};
  CHECK(filter_decision(c, Player::First, most_selected_rule) == Action{0});
  CHECK(filter_decision(c, Player::First, best_value_rule) == Action{1});
}
