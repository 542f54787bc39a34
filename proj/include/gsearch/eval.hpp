#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gsearch/game.hpp"
#include "gsearch/rng.hpp"

namespace gsearch {

/// Recipe for one heuristic evaluator; enough to rebuild it bit-exactly.
struct EvalDescriptor {
  enum class Kind { Linear, Oracle };

  Kind kind = Kind::Linear;
  /// Linear: feature weights, squashed through tanh.
  std::vector<double> weights;
  /// Oracle (tictactoe only): exact value plus hashed noise of this amplitude.
  double noise = 0.0;
  std::uint64_t noise_seed = 0;

  friend bool operator==(const EvalDescriptor&, const EvalDescriptor&) = default;
};

/// Heuristic evaluation f(s) of a non-terminal state, first-player view, in
/// the open interval (-1, 1). Immutable and safe to share across threads.
class EvalFn {
 public:
  struct Identity {
    std::string game;
    std::uint64_t family_seed = 0;
    int member = 0;
  };

  EvalFn(GameSpec game, Identity identity, EvalDescriptor descriptor);

  double operator()(const Game& s) const;

  const Identity& identity() const noexcept { return identity_; }
  const EvalDescriptor& descriptor() const noexcept { return descriptor_; }
  const GameSpec& game() const noexcept { return game_; }

 private:
  GameSpec game_;
  Identity identity_;
  EvalDescriptor descriptor_;
};

/// f_t: exact scorer of ended states. Defaults to Game::terminal_value.
using TerminalScorer = std::function<double(const Game&)>;

double default_terminal_score(const Game& s);

/// f_t(s) when s has ended, f(s) otherwise.
double evaluate_semicompleted(const EvalFn& f, const TerminalScorer& terminal, const Game& s);

struct EvalRange {
  double max = 1.0;  // M
  double min = -1.0;  // m
  std::size_t samples = 1;
};

/// Max and min terminal score over `samples` uniformly random playouts from
/// `start`. Deterministic given the seed; `start` is left unchanged.
EvalRange estimate_range(Game& start, std::size_t samples, std::uint64_t seed,
                         const TerminalScorer& terminal = default_terminal_score);

/// Plays uniformly random legal actions until the position ends, returns the
/// terminal value and undoes every action played.
int random_playout(Game& s, Rng& rng);

/// round(delta * value / max(|M|, |m|)), half away from zero. Throws
/// DegenerateRange when max(|M|, |m|) == 0.
long long discretize(double value, int delta, const EvalRange& range);

/// Affine map of clamp(value, m, M) onto [0, 1]. Throws DegenerateRange when
/// M == m.
double normalize_unit(double value, const EvalRange& range);
double denormalize_unit(double unit, const EvalRange& range);

/// The value function the searches consume: first-player view, already
/// semi-completed.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual double operator()(const Game& s) const = 0;
  /// True when every value is an integer (required by PVS and MTD(f)).
  virtual bool integral() const { return false; }
  /// Search-scale value of a solved outcome in {-1, 0, +1}.
  virtual double outcome_value(int outcome) const { return outcome; }
};

class SemiCompletedEval final : public Evaluator {
 public:
  explicit SemiCompletedEval(EvalFn f, TerminalScorer terminal = default_terminal_score);
  double operator()(const Game& s) const override;
  const EvalFn& heuristic() const noexcept { return f_; }

 private:
  EvalFn f_;
  TerminalScorer terminal_;
};

/// D_f over a base evaluator.
class DiscretizedEval final : public Evaluator {
 public:
  DiscretizedEval(std::shared_ptr<const Evaluator> base, int delta, EvalRange range);
  double operator()(const Game& s) const override;
  bool integral() const override { return true; }
  double outcome_value(int outcome) const override;

  int delta() const noexcept { return delta_; }
  const EvalRange& range() const noexcept { return range_; }

 private:
  std::shared_ptr<const Evaluator> base_;
  int delta_;
  EvalRange range_;
};

long long discretize_value(const DiscretizedEval& d, const Game& s);

/// normalize_unit of f's semi-completed value at s.
double normalize_eval(const EvalFn& f, const EvalRange& range, const Game& s);

// Feature model behind the linear evaluators.
std::size_t feature_count(GameId game);
std::vector<double> baseline_weights(GameId game);
void compute_features(const GameSpec& spec, const Game& s, std::span<double> out);

/// Exact minimax value of a tictactoe position (first-player view).
int tictactoe_value(const Game& s);
/// Number of distinct positions reachable from the empty tictactoe board.
std::size_t tictactoe_reachable_positions();

struct EvalFamily {
  GameSpec game;
  std::uint64_t seed = 0;
  std::vector<EvalFn> members;
};

/// `count` deterministic evaluators: member 0 uses the hand-tuned baseline
/// weights, the others seeded multiplicative perturbations of them. For
/// tictactoe, member 1 (when count >= 2) is the exact-value oracle with noise.
EvalFamily make_heuristic_family(const GameSpec& game, int count, std::uint64_t seed);

/// Line-oriented `key = value` descriptor; see write_family for the layout.
void write_family(std::ostream& out, const EvalFamily& family);
EvalFamily read_family(std::istream& in);

}  // namespace gsearch
