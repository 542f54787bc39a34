#include <sstream>

#include "doctest.h"
#include "gsearch/config.hpp"
#include "gsearch/error.hpp"

using namespace gsearch;

namespace {

TournamentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_tournament_config(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* const kFull = R"(# full example
[tournament]
seed = 42
repetitions = 2
workers = 3
out = run.csv

[games]
game = breakthrough:6x6
game = hex:7x7

[evals]
count = 15
seed = 9
range_samples = 1000

[budget]
time_per_move = 0.05
draw_cap = 300

[algorithms]
candidates = ubfm_s, kbest:k=3, mcts:C=0.3
benchmark = ubfm
batch_workers = 2
kbest.scope = root
solver = off

[tune]
grid = pvs:delta=10,100,1000

[stats]
bootstrap = 2000
level = 0.1
seed = 3
statistic = pooled
)";

}  // namespace

TEST_CASE("full configuration") {
  const auto c = parse(kFull);
  CHECK(c.seed == 42);
  CHECK(c.repetitions == 2);
  CHECK(c.workers == 3);
  CHECK(c.out == "run.csv");
  REQUIRE(c.games.size() == 2);
  CHECK(c.games[1].id == GameId::Hex);
  CHECK(c.games[1].draw_cap == 300);
  CHECK(c.eval_count == 15);
  CHECK(c.range_samples == 1000);
  CHECK(*c.time_per_move == 0.05);
  CHECK(!c.node_budget.has_value());
  CHECK(c.draw_cap == 300);
  REQUIRE(c.candidates.size() == 3);
  CHECK(c.candidates[1].to_string() == "kbest:k=3");
  CHECK(c.batch_workers == 2);
  CHECK(c.kbest_scope == KbestScope::Root);
  CHECK(!c.solver);
  CHECK(c.stats.bootstrap == 2000);
  CHECK(c.stats.pooled);
  CHECK(expand_grid(c.grid).size() == 3);
  CHECK(c.budget().seconds == 0.05);
}

TEST_CASE("configuration errors name the line") {
  CHECK(error_of("[games]\ngame = tictactoe\n[evals]\ncuont = 2\n").find("line 4: ") == 0);
  CHECK(error_of("[games]\ngame = tictactoe\n[budget]\nnode_budget = lots\n").find("line 4: ") == 0);
  CHECK(error_of("[games]\ngame = chess\n[budget]\nnode_budget = 5\n").find("line 2: ") == 0);
  CHECK(error_of("[games\n").find("line 1: ") == 0);
  CHECK(error_of("seed = 3\n").find("line 1: ") == 0);
  CHECK(error_of("[games]\ngame = tictactoe\n[algorithms]\ncandidates = ubfm, bogus\n[budget]\nnode_budget = 5\n")
            .find("line 4: ") == 0);
  CHECK(!error_of("[budget]\nnode_budget = 5\n").empty());
  CHECK(!error_of("[games]\ngame = tictactoe\n").empty());
  CHECK(!error_of("[games]\ngame = tictactoe\n[budget]\nnode_budget = 5\n[evals]\ncount = 0\n").empty());
}

TEST_CASE("comments and whitespace") {
  const auto c = parse("; leading comment\n[games]   # trailing\n  game =  tictactoe  \n[budget]\nnode_budget=10\n[algorithms]\ncandidates = ab\n");
  CHECK(c.games.size() == 1);
  CHECK(*c.node_budget == 10);
}

TEST_CASE("algorithm specs") {
  CHECK(AlgorithmSpec::parse("pvs:100").to_string() == "pvs:delta=100");
  CHECK(AlgorithmSpec::parse("mtdf:delta=3000").delta == 3000);
  CHECK(AlgorithmSpec::parse("kbest:inf").params() == "k=inf");
  CHECK(!AlgorithmSpec::parse("kbest:k=inf").k.has_value());
  CHECK(AlgorithmSpec::parse("mcts:C=sqrt2").params() == "C=sqrt2");
  CHECK(AlgorithmSpec::parse("mcts_h:C=0.0001").c == 0.0001);
  CHECK(AlgorithmSpec::parse("mcts:C=0").c == 0.0);
  CHECK(AlgorithmSpec::parse("ubfm_s").id() == "ubfm_s");
  CHECK(AlgorithmSpec::parse("ab_batch").child_batching_default());
  CHECK(!AlgorithmSpec::parse("ab").child_batching_default());
  for (const char* s : {"ab", "ab_batch", "pvs:delta=10", "mtdf:delta=100", "kbest:k=3", "ubfm", "ubfm_s",
                        "mcts:C=sqrt2", "mcts_h:C=0.3", "random", "oracle"})
    CHECK(AlgorithmSpec::parse(AlgorithmSpec::parse(s).to_string()) == AlgorithmSpec::parse(s));
  CHECK_THROWS_AS(AlgorithmSpec::parse("minimax"), ConfigError);
  CHECK_THROWS_AS(AlgorithmSpec::parse("kbest:k=0"), ConfigError);
  CHECK_THROWS_AS(AlgorithmSpec::parse("mcts:C=-1"), ConfigError);
  CHECK(parse_algorithm_list("ubfm_s,kbest:k=3").size() == 2);
}

TEST_CASE("tuning grids") {
  const auto g = expand_grid("mcts:C=sqrt2,1,0.3");
  REQUIRE(g.size() == 3);
  CHECK(g[0].params() == "C=sqrt2");
  CHECK(g[2].c == 0.3);
  CHECK(expand_grid("kbest:k=2,3,inf").back().params() == "k=inf");
  CHECK_THROWS_AS(expand_grid(""), ConfigError);
  CHECK_THROWS_AS(expand_grid("mcts:C="), ConfigError);
}
