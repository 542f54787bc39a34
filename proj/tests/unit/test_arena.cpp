#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gsearch/arena.hpp"
#include "gsearch/config.hpp"
#include "gsearch/engine.hpp"
#include "gsearch/error.hpp"
#include "gsearch/games.hpp"

using namespace gsearch;

namespace {

EngineSetup setup_for(const GameSpec& spec, std::uint64_t seed, int member = 0) {
  EngineSetup s;
  s.game = spec;
  s.heuristic = std::make_shared<const EvalFn>(make_heuristic_family(spec, 2, 3).members[member]);
  s.seed = seed;
  return s;
}

class IllegalEngine final : public Engine {
 public:
  Action choose(Game&, const SearchBudget&) override { return {999}; }
};

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("gsearch_test_" + name)).string();
}

TournamentConfig minimal_config(const std::string& out) {
  TournamentConfig c;
  c.seed = 5;
  c.games = {GameSpec::parse("tictactoe")};
  c.eval_count = 2;
  c.eval_seed = 3;
  c.range_samples = 200;
  c.node_budget = 200;
  c.candidates = parse_algorithm_list("ubfm_s");
  c.out = out;
  return c;
}

}  // namespace

TEST_CASE("the tictactoe oracle never loses to random play") {
  const auto spec = GameSpec::parse("tictactoe");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto oracle = make_engine(AlgorithmSpec::parse("oracle"), setup_for(spec, seed));
    auto random = make_engine(AlgorithmSpec::parse("random"), setup_for(spec, seed + 1000));
    const auto out = play_match(spec, *oracle, *random, seed % 2 ? Player::Second : Player::First,
                                SearchBudget::nodes(1), seed);
    REQUIRE(!out.violation);
    CHECK(out.record.score >= 0);
  }
}

TEST_CASE("identical engines replay identically and mirror across colors") {
  const auto spec = GameSpec::parse("breakthrough:6x6");
  MatchRecord first[2], second[2];
  for (int run = 0; run < 2; ++run)
    for (Player color : {Player::First, Player::Second}) {
      auto a = make_engine(AlgorithmSpec::parse("ubfm"), setup_for(spec, 1));
      auto b = make_engine(AlgorithmSpec::parse("ubfm"), setup_for(spec, 1));
      const auto out = play_match(spec, *a, *b, color, SearchBudget::nodes(300), 77);
      REQUIRE(!out.violation);
      (color == Player::First ? first : second)[run] = out.record;
    }
  for (auto* r : {&first[0], &first[1], &second[0], &second[1]}) r->millis = 0;
  CHECK(first[0] == first[1]);
  CHECK(second[0] == second[1]);
  CHECK(first[0].plies == second[0].plies);
  CHECK(first[0].score == -second[0].score);
}

TEST_CASE("othello draw cap is adjudicated by the disc difference") {
  const auto spec = GameSpec::parse("othello:8x8:cap=10");
  auto a = make_engine(AlgorithmSpec::parse("random"), setup_for(spec, 1));
  auto b = make_engine(AlgorithmSpec::parse("random"), setup_for(spec, 2));
  const auto out = play_match(spec, *a, *b, Player::First, SearchBudget::nodes(1), 3);
  CHECK(out.record.plies == 10);
  // Replaying the same random engines reproduces the final board.
  auto c = make_engine(AlgorithmSpec::parse("random"), setup_for(spec, 1));
  auto d = make_engine(AlgorithmSpec::parse("random"), setup_for(spec, 2));
  auto g = make_game(spec);
  while (!g->ended()) g->apply((g->mover() == Player::First ? *c : *d).choose(*g, SearchBudget::nodes(1)));
  const int diff = dynamic_cast<Othello&>(*g).disc_difference();
  CHECK(out.record.score == (diff > 0) - (diff < 0));
}

TEST_CASE("illegal moves forfeit and are reported as violations") {
  const auto spec = GameSpec::parse("tictactoe");
  IllegalEngine bad;
  auto good = make_engine(AlgorithmSpec::parse("random"), setup_for(spec, 1));
  const auto out = play_match(spec, bad, *good, Player::First, SearchBudget::nodes(1), 1);
  CHECK(out.violation);
  CHECK(out.record.score == -1);
  CHECK(!out.detail.empty());
}

TEST_CASE("schedule sizes") {
  TournamentConfig c = minimal_config("unused.csv");
  c.eval_count = 15;
  CHECK(schedule(c, c.candidates).size() == 450);
  c.eval_count = 2;
  CHECK(schedule(c, c.candidates).size() == 8);
  c.games.push_back(GameSpec::parse("hex:5x5"));
  c.repetitions = 3;
  const auto candidates = parse_algorithm_list("ubfm_s,kbest:k=3");
  CHECK(schedule(c, candidates).size() == 2 * 3 * 2 * 8);
  const auto plan = schedule(c, candidates);
  std::set<std::uint64_t> seeds;
  for (const auto& m : plan) seeds.insert(m.seed);
  CHECK(seeds.size() == plan.size());
}

TEST_CASE("tournament: 8 records, replayable, resumable") {
  const auto path = temp_path("tournament.csv");
  std::remove(path.c_str());
  const auto c = minimal_config(path);
  const auto first = run_tournament(c);
  CHECK(first.records.size() == 8);
  CHECK(first.played == 8);
  CHECK(first.violations.empty());
  CHECK(read_records_file(path).size() == 8);

  const auto again = run_tournament(c, RunOptions{true, {}});
  CHECK(again.played == 0);
  CHECK(again.skipped == 8);
  CHECK(again.records.size() == 8);

  // Drop the last three lines and resume: only those matches are replayed.
  std::vector<std::string> lines;
  {
    std::ifstream in(path);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
  }
  {
    std::ofstream out(path, std::ios::trunc);
    for (std::size_t i = 0; i + 3 < lines.size(); ++i) out << lines[i] << '\n';
  }
  const auto resumed = run_tournament(c, RunOptions{true, {}});
  CHECK(resumed.played == 3);
  CHECK(resumed.skipped == 5);
  auto strip = [](std::vector<MatchRecord> v) {
    for (auto& r : v) r.millis = 0;
    return v;
  };
  CHECK(strip(resumed.records) == strip(first.records));

  std::remove(path.c_str());
  const auto fresh = run_tournament(c);
  CHECK(strip(fresh.records) == strip(first.records));
  std::remove(path.c_str());
}

TEST_CASE("record log round trip and parse errors") {
  MatchRecord r{"hex:7x7", "mcts", "C=sqrt2", "ubfm", 3, 4, Player::Second, -1, 41, 123, 987654321};
  CHECK(format_record(r) == "hex:7x7,mcts,C=sqrt2,ubfm,3,4,second,-1,41,123,987654321");
  CHECK(parse_record(format_record(r)) == r);
  std::stringstream io;
  write_records(io, {r, r});
  CHECK(io.str().rfind(std::string(kRecordHeader) + "\n", 0) == 0);
  CHECK(read_records(io).size() == 2);
  CHECK_THROWS_AS(parse_record("hex:7x7,mcts", 12), ConfigError);
  try {
    parse_record("a,b,c,d,x,0,first,0,0,0,0", 12);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 12") != std::string::npos);
  }
  CHECK_THROWS_AS(read_records_file(temp_path("does_not_exist.csv")), IoError);
}

TEST_CASE("report from records") {
  std::vector<MatchRecord> records;
  for (int i = 0; i < 4; ++i) {
    records.push_back({"tictactoe:3x3", "ubfm_s", "", "ubfm", 0, 0, Player::First, 1, 9, 0,
                       static_cast<std::uint64_t>(i)});
    records.push_back({"hex:5x5", "ubfm_s", "", "ubfm", 0, 0, Player::First, i % 2 ? 1 : -1, 9, 0,
                       static_cast<std::uint64_t>(i)});
  }
  BootstrapOptions o;
  o.replicates = 500;
  const auto report = build_report(records, o);
  REQUIRE(report.games == std::vector<std::string>{"hex:5x5", "tictactoe:3x3"});
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].algorithm == "ubfm_s");
  CHECK(*report.rows[0].mean == doctest::Approx(50.0));
  CHECK(report.rows[0].per_game[1]->mean == 1.0);
}
