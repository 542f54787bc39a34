#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "gsearch/gsearch.h"
#include "gsearch_golden.hpp"

namespace {

void append(const char* text, void* user) { *static_cast<std::string*>(user) += text; }

}  // namespace

TEST_CASE("C API: games") {
  gsearch_game* g = nullptr;
  REQUIRE(gsearch_game_new("tictactoe", &g) == GSEARCH_OK);
  uint32_t actions[16];
  size_t count = 0;
  REQUIRE(gsearch_game_actions(g, actions, 16, &count) == GSEARCH_OK);
  CHECK(count == 9);
  const uint64_t start = gsearch_game_key(g);
  CHECK(gsearch_game_first_to_move(g) == 1);
  CHECK(gsearch_game_apply(g, 4) == GSEARCH_OK);
  CHECK(gsearch_game_apply(g, 4) == GSEARCH_ERR_CONTRACT);
  CHECK(std::string(gsearch_last_error()).size() > 0);
  size_t needed = 0;
  char buffer[64];
  CHECK(gsearch_game_position(g, buffer, sizeof buffer, &needed) == GSEARCH_OK);
  CHECK(std::string(buffer) == "tictactoe:3x3 .../.x./... o");
  CHECK(gsearch_game_undo(g) == GSEARCH_OK);
  CHECK(gsearch_game_key(g) == start);
  CHECK(gsearch_game_undo(g) == GSEARCH_ERR_CONTRACT);
  int value = 7;
  CHECK(gsearch_game_terminal_value(g, &value) == GSEARCH_ERR_CONTRACT);
  gsearch_game_free(g);

  CHECK(gsearch_game_new("chess", &g) == GSEARCH_ERR_CONFIG);
  CHECK(gsearch_game_new(nullptr, &g) == GSEARCH_ERR_ARGUMENT);
  REQUIRE(gsearch_game_from_position("tictactoe:3x3 xxx/oo./... o", &g) == GSEARCH_OK);
  CHECK(gsearch_game_ended(g) == 1);
  CHECK(gsearch_game_terminal_value(g, &value) == GSEARCH_OK);
  CHECK(value == 1);
  gsearch_game_free(g);
}

TEST_CASE("C API: engines") {
  gsearch_engine_options o;
  gsearch_engine_options_init(&o);
  o.algorithm = "ubfm_s";
  o.game = "tictactoe";
  gsearch_engine* e = nullptr;
  REQUIRE(gsearch_engine_new(&o, &e) == GSEARCH_OK);
  gsearch_game* g = nullptr;
  REQUIRE(gsearch_game_from_position("tictactoe:3x3 xx./oo./... x", &g) == GSEARCH_OK);
  gsearch_move m;
  CHECK(gsearch_engine_choose(e, g, 0, 1000, &m) == GSEARCH_OK);
  CHECK(m.action == 2);
  CHECK(m.solved == 1);
  CHECK(m.outcome == 1);
  CHECK(gsearch_engine_choose(e, g, 0, 0, &m) == GSEARCH_ERR_CONFIG);
  gsearch_game_free(g);
  gsearch_engine_free(e);

  o.algorithm = "nonsense";
  CHECK(gsearch_engine_new(&o, &e) == GSEARCH_ERR_CONFIG);
  o.algorithm = "ab";
  o.eval_member = 5;
  CHECK(gsearch_engine_new(&o, &e) == GSEARCH_ERR_CONFIG);
}

TEST_CASE("C API: report reproduces the golden files") {
  const std::string log = std::string(GSEARCH_TEST_DATA) + "/synthetic_records.csv";
  std::string csv, md;
  CHECK(gsearch_report(log.c_str(), "csv", 7, 2000, append, &csv) == GSEARCH_OK);
  CHECK(gsearch_report(log.c_str(), "md", 7, 2000, append, &md) == GSEARCH_OK);
  CHECK(csv == gsearch::golden::kReportCsv);
  CHECK(md == gsearch::golden::kReportMd);
  std::string none;
  CHECK(gsearch_report("/nonexistent/log.csv", "csv", 1, 10, append, &none) == GSEARCH_ERR_IO);
  CHECK(gsearch_report(log.c_str(), "pdf", 1, 10, append, &none) == GSEARCH_ERR_CONFIG);
}

TEST_CASE("C API: run, dry run and tune") {
  const std::string config = std::string(GSEARCH_TEST_DATA) + "/minimal.ini";
  const auto out = (std::filesystem::temp_directory_path() / "gsearch_capi_run.csv").string();
  std::remove(out.c_str());
  gsearch_run_options o;
  gsearch_run_options_init(&o);
  o.config_path = config.c_str();
  o.out_path = out.c_str();
  o.format = "csv";
  std::string text;
  CHECK(gsearch_run(&o, append, &text) == GSEARCH_OK);
  CHECK(text.find("played 8 of 8") != std::string::npos);
  text.clear();
  o.resume = 1;
  CHECK(gsearch_run(&o, append, &text) == GSEARCH_OK);
  CHECK(text.find("played 0 of 8") != std::string::npos);

  text.clear();
  o.dry_run = 1;
  o.algorithms = "ubfm_s,kbest:k=3";
  CHECK(gsearch_run(&o, append, &text) == GSEARCH_OK);
  CHECK(text.find("scheduled 16 matches (2 candidate(s)") != std::string::npos);

  text.clear();
  o.grid = "mcts:C=sqrt2,1,0.3";
  CHECK(gsearch_tune(&o, append, &text) == GSEARCH_OK);
  CHECK(text.find("scheduled 24 matches (3 candidate(s)") != std::string::npos);
  o.grid = "";
  CHECK(gsearch_tune(&o, append, &text) == GSEARCH_ERR_CONFIG);

  const std::string bad = std::string(GSEARCH_TEST_DATA) + "/bad.ini";
  o.config_path = bad.c_str();
  CHECK(gsearch_run(&o, append, &text) == GSEARCH_ERR_CONFIG);
  CHECK(std::string(gsearch_last_error()).find("line 8: ") == 0);
  std::remove(out.c_str());
}
