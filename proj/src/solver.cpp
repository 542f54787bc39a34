#include "gsearch/solver.hpp"

#include "gsearch/error.hpp"

namespace gsearch {

Resolution update_resolution(Player mover, std::span<const Resolution> children, bool complete) {
  const int sign = view_sign(mover);
  bool all_solved = complete && !children.empty();
  int best = -2;
  for (Resolution r : children) {
    if (r.wins_for(mover)) return r;
    if (!r.is_solved()) {
      all_solved = false;
      continue;
    }
    best = std::max(best, sign * r.outcome());
  }
  return all_solved ? Resolution::solved(sign * best) : Resolution::unsolved();
}

Resolution terminal_resolution(const Game& s) { return Resolution::solved(s.terminal_value()); }

std::size_t best_value_rule(std::span<const Candidate> c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i].relative_value > c[best].relative_value) best = i;
  return best;
}

std::size_t most_selected_rule(std::span<const Candidate> c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].count > c[best].count ||
        (c[i].count == c[best].count && c[i].relative_value > c[best].relative_value))
      best = i;
  }
  return best;
}

std::size_t most_visited_rule(std::span<const Candidate> c) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i].count > c[best].count || (c[i].count == c[best].count && c[i].mean > c[best].mean))
      best = i;
  }
  return best;
}

BaseRule prefer_rule(Action preferred) {
  return [preferred](std::span<const Candidate> c) {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i].action == preferred) return i;
    return best_value_rule(c);
  };
}

Action filter_decision(std::span<const Candidate> candidates, Player mover, const BaseRule& base) {
  if (candidates.empty()) throw ContractViolation("filter_decision needs at least one candidate");
  std::vector<Candidate> winning, safe;
  for (const auto& c : candidates) {
    if (c.resolution.wins_for(mover)) winning.push_back(c);
    if (!c.resolution.loses_for(mover)) safe.push_back(c);
  }
  if (!winning.empty()) return winning[base(winning)].action;
  if (!safe.empty()) return safe[base(safe)].action;
  return candidates[base(candidates)].action;
}

}  // namespace gsearch
