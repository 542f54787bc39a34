#include "gsearch/mcts.hpp"

#include <cmath>
#include <vector>

#include "gsearch/error.hpp"
#include "gsearch/solver.hpp"

namespace gsearch {

namespace {

// First player's reward for a terminal value in {-1, 0, 1}.
double first_reward(int terminal) { return 0.5 * (terminal + 1); }

double for_mover(double first, Player mover) { return mover == Player::First ? first : 1.0 - first; }

void init_actions(TtEntry& e, const Game& s) {
  if (!e.actions.empty()) return;
  for (Action a : s.actions()) e.actions.push_back(stats_of(a));
}

}  // namespace

double uct_score(double wins, std::uint64_t visits, std::uint64_t total, double c) {
  if (visits == 0 || total < visits) throw ContractViolation("uct_score needs 1 <= n <= total");
  const double n = static_cast<double>(visits);
  return wins / n + c * std::sqrt(std::log(static_cast<double>(total)) / n);
}

double random_rollout(Game& s, Rng& rng) {
  return for_mover(first_reward(random_playout(s, rng)), s.mover());
}

double heuristic_rollout(const Evaluator& f, const EvalRange& range, const Game& s) {
  return for_mover(normalize_unit(f(s), range), s.mover());
}

MonteCarloSearch::MonteCarloSearch(TranspositionTable& tt, MctsOptions options,
                                   const Evaluator* heuristic, EvalRange range)
    : tt_(tt), options_(options), heuristic_(heuristic), range_(range), rng_(options.seed) {
  if (options_.c < 0) throw ConfigError("UCT constant must be non-negative");
  if (options_.rollout == Rollout::Heuristic) {
    if (!heuristic_) throw ConfigError("MCTS_h needs an evaluation function");
    if (range_.max == range_.min) throw DegenerateRange("MCTS_h range has M == m");
  }
}

double MonteCarloSearch::simulate(Game& s) {
  // Reward in the first player's view.
  if (options_.rollout == Rollout::Heuristic) return normalize_unit((*heuristic_)(s), range_);
  return first_reward(random_playout(s, rng_));
}

void MonteCarloSearch::iterate(Game& root) {
  if (root.ended()) throw ContractViolation("Monte Carlo search from an ended position");
  struct Step {
    std::uint64_t key;
    std::size_t index;
    Player mover;
  };
  std::vector<Step> path;
  double reward = 0;
  for (;;) {
    if (root.ended()) {
      reward = first_reward(root.terminal_value());
      break;
    }
    TtEntry& e = tt_.emplace(root.key());
    init_actions(e, root);
    std::vector<std::size_t> missing;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < e.actions.size(); ++i) {
      if (e.actions[i].visits == 0) missing.push_back(i);
      total += e.actions[i].visits;
    }
    if (!missing.empty()) {
      const std::size_t i = missing[rng_.below(missing.size())];
      path.push_back({root.key(), i, root.mover()});
      root.apply(e.actions[i].action);
      reward = root.ended() ? first_reward(root.terminal_value()) : simulate(root);
      break;
    }
    std::size_t best = 0;
    double best_score = -1;
    for (std::size_t i = 0; i < e.actions.size(); ++i) {
      const auto& st = e.actions[i];
      const double score = uct_score(st.wins, st.visits, total, options_.c);
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    path.push_back({root.key(), best, root.mover()});
    root.apply(e.actions[best].action);
  }

  Resolution child = root.ended() ? Resolution::solved(root.terminal_value()) : Resolution::unsolved();
  if (!root.ended())
    if (const TtEntry* c = tt_.probe(root.key())) child = c->resolution;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    root.undo();
    TtEntry* e = tt_.probe(it->key);
    if (!e) {
      child = Resolution::unsolved();
      continue;
    }
    auto& st = e->actions[it->index];
    st.wins += for_mover(reward, it->mover);
    ++st.visits;
    st.resolution = child;
    std::vector<Resolution> rs;
    rs.reserve(e->actions.size());
    for (const auto& a : e->actions) rs.push_back(a.resolution);
    e->resolution = update_resolution(it->mover, rs, true);
    child = e->resolution;
  }
  ++iterations_;
}

SearchResult MonteCarloSearch::search(Game& root, const SearchBudget& budget) {
  budget.validate();
  BudgetTracker tracker(budget, 1);
  const std::uint64_t before = iterations_;
  tracker.disarm();
  tracker.tick();
  iterate(root);
  tracker.arm();
  while (!tracker.tick()) iterate(root);
  const TtEntry* e = tt_.probe(root.key());
  SearchResult r;
  r.action = mcts_decide(*e, root.mover(), options_.solver);
  for (const auto& st : e->actions) {
    if (st.action == r.action && st.visits > 0)
      r.value = view_sign(root.mover()) * (2 * st.wins / st.visits - 1);
  }
  r.resolution = e->resolution;
  r.iterations = iterations_ - before;
  r.nodes = r.iterations;
  r.seconds = tracker.elapsed();
  return r;
}

Action mcts_decide(const TtEntry& root, Player mover, bool solver) {
  std::vector<Candidate> c;
  for (const auto& st : root.actions) {
    if (st.visits == 0) continue;
    c.push_back({st.action, st.resolution, 0, st.visits, st.wins / st.visits});
  }
  if (c.empty()) throw ContractViolation("MCTS decision with no visited root action");
  return solver ? filter_decision(c, mover, most_visited_rule) : c[most_visited_rule(c)].action;
}

}  // namespace gsearch
