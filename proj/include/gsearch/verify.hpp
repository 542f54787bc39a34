#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gsearch/arena.hpp"
#include "gsearch/eval.hpp"
#include "gsearch/game.hpp"
#include "gsearch/games.hpp"

namespace gsearch::verify {

/// Leaf values of a RandomTree as the evaluation (integer valued).
class TreeEval final : public Evaluator {
 public:
  double operator()(const Game& s) const override;
  bool integral() const override { return true; }
};

/// Plain full-width minimax to the end of the game, first-player view, with
/// `eval` at ended states. Counts visited nodes.
double minimax(Game& s, const Evaluator& eval, std::uint64_t* nodes = nullptr);

/// The 200-tree corpus: branching <= 5, depth <= 5, leaves in [-100, 100].
std::vector<RandomTree> tree_corpus(std::size_t count = 200, std::uint64_t seed = 2024);

/// Exact tictactoe values for every reachable position, computed on a plain
/// 9-cell array and keyed by the Game's state key.
class TicTacToeOracle {
 public:
  TicTacToeOracle();
  std::optional<int> value(std::uint64_t key) const;
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::unordered_map<std::uint64_t, int> values_;
};

/// Deterministic synthetic records backing the golden report.
std::vector<MatchRecord> synthetic_records();
BootstrapOptions golden_bootstrap();

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool gating = true;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;
};

CriterionResult exactness();
CriterionResult batching_losslessness();
CriterionResult tictactoe_optimality();
CriterionResult solver_soundness();
CriterionResult bestfirst_identity();
CriterionResult mcts_sanity();
CriterionResult mtdf_convergence();
CriterionResult protocol_arithmetic();
/// The golden report texts (csv, md) to compare against.
CriterionResult statistics(const std::string& golden_csv, const std::string& golden_md);

struct DirectionalOptions {
  int evals = 8;
  double seconds_per_move = 0.05;
  int repetitions = 2;
  int workers = 1;
  std::uint64_t seed = 1;
  std::string out = "directional.csv";
  std::vector<std::string> games{"breakthrough:6x6", "hex:7x7"};
};
/// UBFM_s against UBFM under the full protocol; passes when the bootstrap
/// lower bound of UBFM_s's mean score is at least -2%. Informative only.
CriterionResult directional(const DirectionalOptions& options, std::string* report_md = nullptr);

/// Criteria 1-9 in order; `each` sees every result as soon as it is known.
std::vector<CriterionResult> run_gating(const std::string& golden_csv, const std::string& golden_md,
                                        const std::function<void(const CriterionResult&)>& each = {});

}  // namespace gsearch::verify
