#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gsearch/game.hpp"

namespace gsearch {

/// r_s: unsolved, or solved with an exact outcome in {-1, 0, +1} (first-player
/// view).
class Resolution {
 public:
  constexpr Resolution() = default;

  static constexpr Resolution unsolved() { return {}; }
  static constexpr Resolution solved(int outcome) { return Resolution(outcome); }

  constexpr bool is_solved() const noexcept { return solved_; }
  constexpr int outcome() const noexcept { return outcome_; }

  constexpr bool wins_for(Player p) const noexcept {
    return solved_ && outcome_ == view_sign(p);
  }
  constexpr bool loses_for(Player p) const noexcept {
    return solved_ && outcome_ == -view_sign(p);
  }

  friend constexpr bool operator==(Resolution, Resolution) = default;

 private:
  constexpr explicit Resolution(int outcome) : solved_(true), outcome_(static_cast<std::int8_t>(outcome)) {}

  bool solved_ = false;
  std::int8_t outcome_ = 0;
};

/// Resolution of an expanded state from its children. `children` lists the
/// resolution of every child known so far; `complete` says whether it covers
/// all of the state's actions.
///
/// A child solved winning for the mover solves the state; when every child is
/// solved the state takes the best outcome for the mover; otherwise it stays
/// unsolved.
Resolution update_resolution(Player mover, std::span<const Resolution> children, bool complete);

/// Overload for a state that has itself ended.
Resolution terminal_resolution(const Game& s);

/// One root action as seen by the final decision.
struct Candidate {
  Action action;
  Resolution resolution;
  double relative_value = 0;  // v-bar: mover's view
  std::uint64_t count = 0;    // n: selections or visits
  double mean = 0;            // MCTS mean reward, tie-break only
};

/// Picks an index into the given candidate subset (canonical order preserved).
using BaseRule = std::function<std::size_t(std::span<const Candidate>)>;

/// argmax v-bar, ties to the lowest canonical index.
std::size_t best_value_rule(std::span<const Candidate> c);
/// argmax (n, v-bar) lexicographically, ties to the lowest canonical index.
std::size_t most_selected_rule(std::span<const Candidate> c);
/// argmax n, then mean reward, then lowest canonical index.
std::size_t most_visited_rule(std::span<const Candidate> c);
/// The given action if present, otherwise best_value_rule.
BaseRule prefer_rule(Action preferred);

/// Solver overlay on the final decision: a solved win for the mover is always
/// played and a solved loss is avoided whenever something else is available.
Action filter_decision(std::span<const Candidate> candidates, Player mover, const BaseRule& base);

}  // namespace gsearch
