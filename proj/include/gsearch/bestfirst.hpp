#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gsearch/eval.hpp"
#include "gsearch/game.hpp"
#include "gsearch/rng.hpp"
#include "gsearch/search.hpp"
#include "gsearch/solver.hpp"
#include "gsearch/transposition.hpp"

namespace gsearch {

struct BestFirstOptions {
  bool child_batching = true;
  int batch_workers = 1;
  /// Solver filter on the final decision. Resolutions are always tracked
  /// since the descent needs them to skip finished subtrees.
  bool solver = true;
  /// Also count the expanded leaf's best child, so that the root counts sum
  /// to the number of iterations.
  bool count_expansion = true;
  /// Break descent ties uniformly at random instead of by canonical index.
  bool random_ties = false;
  std::uint64_t tie_seed = 0;
  /// Check backup consistency along the path after every iteration.
  bool audit = false;
};

enum class Decision { BestValue, Safest };

/// Unbounded Best-First Minimax over a transposition table. UBFM and UBFM_s
/// run this same search and differ only in the decision.
class BestFirstSearch {
 public:
  BestFirstSearch(const Evaluator& eval, TranspositionTable& tt, BestFirstOptions options = {});

  /// One best-first extension from `root`.
  void iterate(Game& root);

  /// Iterates until the budget runs out or the root is solved; at least one
  /// iteration is made unless the root is already solved.
  SearchResult search(Game& root, const SearchBudget& budget, Decision decision);

  std::uint64_t iterations() const noexcept { return iterations_; }
  std::uint64_t evaluations() const noexcept { return batch_.calls(); }
  /// Path states whose stored value disagreed with the backup rule.
  std::uint64_t audit_failures() const noexcept { return audit_failures_; }
  const BestFirstOptions& options() const noexcept { return options_; }

 private:
  struct Step {
    std::uint64_t key;
    std::size_t index;
    Player mover;
  };

  void expand(Game& s, TtEntry& e);
  std::size_t select(const TtEntry& e, Player mover);
  void audit(const std::vector<Step>& path);

  const Evaluator& eval_;
  TranspositionTable& tt_;
  BestFirstOptions options_;
  BatchEvaluator batch_;
  Rng ties_;
  std::uint64_t iterations_ = 0;
  std::uint64_t audit_failures_ = 0;
};

/// Recomputes v_s and r_s of an expanded entry from its per-action values.
void backup_entry(TtEntry& e, Player mover);

/// argmax v-bar over the root actions (solver filter when `solver`).
Action decide_best_value(const TtEntry& root, Player mover, bool solver = true);
/// argmax (n, v-bar) lexicographically (solver filter when `solver`).
Action decide_safest(const TtEntry& root, Player mover, bool solver = true);
Action decide_best_value(const TranspositionTable& tt, const Game& root, bool solver = true);
Action decide_safest(const TranspositionTable& tt, const Game& root, bool solver = true);

/// One line per expanded entry, sorted by key:
///   <key> r=<?|-1|0|1> v=<value> <action>:<v>:<n> ...
void dump_tree(std::ostream& out, const TranspositionTable& tt);

}  // namespace gsearch
