#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsearch/alphabeta.hpp"
#include "gsearch/engine.hpp"
#include "gsearch/game.hpp"
#include "gsearch/search.hpp"

namespace gsearch {

/// `[section]` headers and `key = value` lines; `#` and `;` start comments.
/// Keys may repeat. Syntax errors throw ConfigError with the line number.
class IniFile {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
  };

  static IniFile parse(std::istream& in);
  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  std::vector<Entry> entries_;
};

struct StatsConfig {
  std::size_t bootstrap = 10000;
  double level = 0.05;
  std::uint64_t seed = 1;
  bool pooled = false;  // pooled mean instead of the mean of per-game means
};

struct TournamentConfig {
  std::uint64_t seed = 1;
  int repetitions = 1;
  int workers = 1;
  std::string out = "records.csv";

  std::vector<GameSpec> games;
  int draw_cap = 400;  // for games whose spec sets no cap

  int eval_count = 2;
  std::uint64_t eval_seed = 1;
  std::size_t range_samples = 10000;

  std::optional<double> time_per_move;
  std::optional<std::uint64_t> node_budget;

  std::vector<AlgorithmSpec> candidates;
  AlgorithmSpec benchmark = AlgorithmSpec::parse("ubfm");
  int batch_workers = 1;
  KbestScope kbest_scope = KbestScope::All;
  bool solver = true;
  bool count_expansion = true;

  /// Tuning grid, e.g. "mcts:C=sqrt2,1,0.3".
  std::string grid;

  StatsConfig stats;

  SearchBudget budget() const;
  /// Throws ConfigError when a required field is missing or out of range.
  void validate() const;
};

TournamentConfig parse_tournament_config(std::istream& in);
TournamentConfig load_tournament_config(const std::string& path);

/// "mcts:C=sqrt2,1,0.3" -> mcts:C=sqrt2, mcts:C=1, mcts:C=0.3. A list of full
/// specs ("pvs:10,pvs:100") is accepted too. Throws ConfigError when empty.
std::vector<AlgorithmSpec> expand_grid(const std::string& grid);

}  // namespace gsearch
