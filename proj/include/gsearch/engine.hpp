#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsearch/alphabeta.hpp"
#include "gsearch/eval.hpp"
#include "gsearch/game.hpp"
#include "gsearch/search.hpp"

namespace gsearch {

/// Parsed algorithm-spec string such as "ab", "pvs:100", "kbest:k=3",
/// "mcts:C=sqrt2", "ubfm_s".
struct AlgorithmSpec {
  enum class Kind { AlphaBeta, AlphaBetaBatch, Pvs, Mtdf, Kbest, Ubfm, UbfmS, Mcts, MctsH, Random, Oracle };

  Kind kind = Kind::Ubfm;
  int delta = 100;          // pvs, mtdf
  std::optional<int> k;     // kbest; nullopt is infinity
  double c = 1.4142135623730951;  // mcts, mcts_h

  /// Throws ConfigError on unknown names or malformed parameters.
  static AlgorithmSpec parse(std::string_view text);

  std::string id() const;      // "kbest"
  std::string params() const;  // "k=3"; several are joined with ';'
  std::string to_string() const;

  bool child_batching_default() const;
  bool needs_heuristic() const;

  friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

/// Comma-separated list of specs.
std::vector<AlgorithmSpec> parse_algorithm_list(std::string_view text);

struct EngineSetup {
  GameSpec game;
  std::shared_ptr<const EvalFn> heuristic;  // unused by random and oracle
  EvalRange range;
  std::uint64_t seed = 0;
  std::optional<bool> child_batching;  // overrides the spec's default
  int batch_workers = 1;
  KbestScope kbest_scope = KbestScope::All;
  bool solver = true;
  bool count_expansion = true;
  std::size_t tt_entries = std::size_t{1} << 22;
};

/// Synchronous "best action within budget" player. Engines keep their
/// transposition table from one move to the next.
class Engine {
 public:
  virtual ~Engine() = default;
  virtual Action choose(Game& s, const SearchBudget& budget) = 0;
  const SearchResult& last() const noexcept { return last_; }

 protected:
  SearchResult last_;
};

std::unique_ptr<Engine> make_engine(const AlgorithmSpec& spec, const EngineSetup& setup);

}  // namespace gsearch
