#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "gsearch/config.hpp"
#include "gsearch/engine.hpp"
#include "gsearch/eval.hpp"
#include "gsearch/game.hpp"
#include "gsearch/stats.hpp"

namespace gsearch {

/// One finished match, scored from the candidate's side whatever its color.
struct MatchRecord {
  std::string game;
  std::string cand_alg;
  std::string params;
  std::string bench_alg;
  int eval_i = 0;  // candidate's evaluator
  int eval_j = 0;  // benchmark's evaluator
  Player color = Player::First;  // candidate's color
  int score = 0;
  int plies = 0;
  long long millis = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

/// Match result plus protocol bookkeeping. A violation (illegal move or an
/// engine failure) forfeits the match against the offender; such matches are
/// logged apart from the records.
struct MatchOutcome {
  MatchRecord record;
  bool violation = false;
  std::string detail;
};

/// Alternates the engines from the initial position of `game` until the game
/// ends (draw cap included). Fills score, plies, millis, seed, color and game.
MatchOutcome play_match(const GameSpec& game, Engine& cand, Engine& bench, Player cand_color,
                        const SearchBudget& budget, std::uint64_t seed);

struct ScheduledMatch {
  std::size_t index = 0;
  std::size_t game = 0;  // into TournamentConfig::games
  int repetition = 0;
  std::size_t candidate = 0;  // into the candidate list
  int eval_i = 0;
  int eval_j = 0;
  Player color = Player::First;
  std::uint64_t seed = 0;
};

/// Games x repetitions x candidates x ordered eval pairs (i, j) including
/// i == j x both colors: 2 m^2 matches per game, repetition and candidate.
std::vector<ScheduledMatch> schedule(const TournamentConfig& config,
                                     const std::vector<AlgorithmSpec>& candidates);

struct RunOptions {
  bool resume = false;
  /// Called after each match (serialized); may be empty.
  std::function<void(const MatchOutcome&, std::size_t done, std::size_t total)> progress;
};

struct TournamentResult {
  std::vector<MatchRecord> records;  // schedule order, resumed ones included
  std::vector<MatchOutcome> violations;
  std::size_t scheduled = 0;
  std::size_t played = 0;
  std::size_t skipped = 0;  // already in the log on resume
};

/// Plays the schedule on `config.workers` threads, appending to the record log
/// at `config.out` (violations go to `<out>.violations`). With resume, matches
/// already in the log are not replayed.
TournamentResult run_tournament(const TournamentConfig& config,
                                const std::vector<AlgorithmSpec>& candidates,
                                const RunOptions& options = {});
TournamentResult run_tournament(const TournamentConfig& config, const RunOptions& options = {});

/// Evaluation family and range shared by the matches of one game and repetition.
struct MatchSetup {
  EvalFamily family;
  EvalRange range;
};
MatchSetup match_setup(const TournamentConfig& config, std::size_t game, int repetition);

// Record log: header plus one comma-separated record per line.
extern const char* const kRecordHeader;
std::string format_record(const MatchRecord& r);
MatchRecord parse_record(const std::string& line, std::size_t line_number = 0);
void write_records(std::ostream& out, const std::vector<MatchRecord>& records);
std::vector<MatchRecord> read_records(std::istream& in);
std::vector<MatchRecord> read_records_file(const std::string& path);

/// Rows per "cand_alg:params" (sorted), game columns sorted.
Report build_report(const std::vector<MatchRecord>& records, const BootstrapOptions& options);

}  // namespace gsearch
