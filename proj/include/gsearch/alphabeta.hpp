#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gsearch/eval.hpp"
#include "gsearch/game.hpp"
#include "gsearch/search.hpp"
#include "gsearch/solver.hpp"
#include "gsearch/transposition.hpp"

namespace gsearch {

enum class KbestScope { All, Root };

struct DepthSearchOptions {
  /// Evaluate the whole frontier of a depth-1 node as one batch.
  bool child_batching = false;
  int batch_workers = 1;
  /// k-best pruning; nullopt means k = infinity.
  std::optional<int> kbest;
  KbestScope kbest_scope = KbestScope::All;
  bool solver = true;
  bool move_ordering = true;
  int check_interval = 64;
};

/// Move ordering: actions with a stored v_{s,a} first, best for the mover
/// first (ties in canonical order), then the rest in canonical order.
std::vector<Action> order_moves(const Game& s, const TranspositionTable& tt);
std::vector<Action> order_moves(std::span<const Action> canonical, Player mover,
                                const TtEntry* entry);

/// First min(k, n) actions when prior ordering values exist, all otherwise.
std::vector<Action> kbest_restrict(std::span<const Action> ordered, std::optional<int> k,
                                   bool has_prior);

/// The Alpha-Beta family over one evaluator and one transposition table.
///
/// Every search routine works in negamax form: values and windows are from
/// the point of view of the player to move at `s`. Table contents are
/// first-player view. Searches are fail-soft.
class DepthSearch {
 public:
  enum class Mode { AlphaBeta, Pvs };

  DepthSearch(const Evaluator& eval, TranspositionTable& tt, DepthSearchOptions options = {});

  double alphabeta(Game& s, int depth, double alpha, double beta);
  /// Requires an integral evaluator (ConfigError otherwise).
  double pvs(Game& s, int depth, double alpha, double beta);

  struct MtdfOutcome {
    double value = 0;
    std::uint64_t zero_window_calls = 0;
    Resolution resolution = Resolution::unsolved();
  };
  /// Requires an integral evaluator (ConfigError otherwise).
  MtdfOutcome mtdf(Game& s, int depth, double guess);

  /// Full-width root search at `depth` returning the chosen action with the
  /// root tie-break (lowest canonical index among value-maximal actions).
  SearchResult search_root(Game& s, int depth, Mode mode = Mode::AlphaBeta);
  SearchResult search_root_mtdf(Game& s, int depth, double guess);

  /// Iterative deepening from depth 1. Depth 1 always completes; a deeper
  /// iteration interrupted by the budget is discarded.
  SearchResult iterative_deepening(Game& s, const SearchBudget& budget, Mode mode = Mode::AlphaBeta);
  SearchResult iterative_deepening_mtdf(Game& s, const SearchBudget& budget);

  std::uint64_t nodes() const noexcept { return nodes_; }
  std::uint64_t evaluations() const noexcept { return batch_.calls(); }
  void reset_counters() { nodes_ = 0; }
  /// True when the last search evaluated a heuristic leaf or pruned inexactly.
  bool hit_horizon() const noexcept { return horizon_; }
  const DepthSearchOptions& options() const noexcept { return options_; }

  /// Aborts searches when the tracker's budget is spent (nullptr disables).
  void set_budget(BudgetTracker* tracker) noexcept { tracker_ = tracker; }

 private:
  struct NodeResult {
    double value;
    Resolution resolution;
  };

  NodeResult node(Game& s, int depth, double alpha, double beta, Mode mode, bool root);
  NodeResult frontier(Game& s, const std::vector<Action>& actions, double alpha, double beta);
  void tick();
  void require_integral() const;
  std::vector<Action> candidate_actions(const Game& s, const std::vector<Action>& canonical,
                                        const TtEntry* entry, bool root);
  void record(Game& s, const std::vector<Action>& canonical, int depth, double alpha0, double beta,
              double best, Resolution res, std::span<const std::pair<Action, double>> values,
              std::span<const std::pair<Action, Resolution>> children);
  SearchResult finish_root(Game& s, int depth, Action chosen, double value, Resolution resolution,
                           const std::vector<Candidate>& candidates);

  const Evaluator& eval_;
  TranspositionTable& tt_;
  DepthSearchOptions options_;
  BatchEvaluator batch_;
  BudgetTracker* tracker_ = nullptr;
  std::uint64_t nodes_ = 0;
  bool horizon_ = false;
};

}  // namespace gsearch
