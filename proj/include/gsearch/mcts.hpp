#pragma once

#include <cstdint>
#include <numbers>

#include "gsearch/eval.hpp"
#include "gsearch/game.hpp"
#include "gsearch/rng.hpp"
#include "gsearch/search.hpp"
#include "gsearch/transposition.hpp"

namespace gsearch {

/// w/n + C * sqrt(ln(total) / n). Requires n >= 1 and total >= n.
double uct_score(double wins, std::uint64_t visits, std::uint64_t total, double c);

/// Uniformly random play to the end; 1, 0.5 or 0 for the player to move at s.
/// `s` is restored before returning.
double random_rollout(Game& s, Rng& rng);

/// normalize_unit of the (semi-completed) evaluation at s, for the player to
/// move at s.
double heuristic_rollout(const Evaluator& f, const EvalRange& range, const Game& s);

enum class Rollout { Random, Heuristic };

struct MctsOptions {
  double c = std::numbers::sqrt2;
  Rollout rollout = Rollout::Random;
  std::uint64_t seed = 0;
  bool solver = true;
};

/// UCT over per-state statistics in a transposition table. MCTS_h replaces
/// the random simulation by a normalized heuristic evaluation.
class MonteCarloSearch {
 public:
  /// `heuristic` and `range` are used only with Rollout::Heuristic.
  MonteCarloSearch(TranspositionTable& tt, MctsOptions options,
                   const Evaluator* heuristic = nullptr, EvalRange range = {});

  /// One select / expand / simulate / backpropagate cycle.
  void iterate(Game& root);

  SearchResult search(Game& root, const SearchBudget& budget);

  std::uint64_t iterations() const noexcept { return iterations_; }
  const MctsOptions& options() const noexcept { return options_; }

 private:
  double simulate(Game& s);

  TranspositionTable& tt_;
  MctsOptions options_;
  const Evaluator* heuristic_;
  EvalRange range_;
  Rng rng_;
  std::uint64_t iterations_ = 0;
};

/// Most visited root action, then best mean reward, then canonical order,
/// with the solver filter when `solver`. Throws when nothing was visited.
Action mcts_decide(const TtEntry& root, Player mover, bool solver = true);

}  // namespace gsearch
