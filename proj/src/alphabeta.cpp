#include "gsearch/alphabeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsearch/error.hpp"

namespace gsearch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Undoes one applied action when leaving scope, including on SearchAborted.
class Applied {
 public:
  Applied(Game& g, Action a) : g_(g) { g_.apply(a); }
  ~Applied() { g_.undo(); }
  Applied(const Applied&) = delete;
  Applied& operator=(const Applied&) = delete;

 private:
  Game& g_;
};

std::size_t canonical_index(std::span<const Action> canonical, Action a) {
  return static_cast<std::size_t>(std::lower_bound(canonical.begin(), canonical.end(), a) -
                                  canonical.begin());
}

const ActionStats* stats_for(const TtEntry& e, std::span<const Action> canonical, std::size_t i) {
  if (e.actions.size() == canonical.size() && e.actions[i].action == canonical[i])
    return &e.actions[i];
  return e.find(canonical[i]);
}

void ensure_actions(TtEntry& e, std::span<const Action> canonical) {
  if (!e.actions.empty()) return;
  e.actions.reserve(canonical.size());
  for (Action a : canonical) e.actions.push_back(stats_of(a));
}

}  // namespace

std::vector<Action> order_moves(std::span<const Action> canonical, Player mover,
                                const TtEntry* entry) {
  std::vector<Action> out(canonical.begin(), canonical.end());
  if (!entry) return out;
  std::vector<std::pair<double, Action>> valued;
  std::vector<Action> rest;
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    const ActionStats* st = stats_for(*entry, canonical, i);
    if (st && st->valued)
      valued.emplace_back(relative_value(st->value, mover), canonical[i]);
    else
      rest.push_back(canonical[i]);
  }
  std::stable_sort(valued.begin(), valued.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  out.clear();
  for (const auto& v : valued) out.push_back(v.second);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<Action> order_moves(const Game& s, const TranspositionTable& tt) {
  const auto canonical = s.actions();
  return order_moves(canonical, s.mover(), tt.probe(s.key()));
}

std::vector<Action> kbest_restrict(std::span<const Action> ordered, std::optional<int> k,
                                   bool has_prior) {
  if (k && *k < 1) throw ConfigError("k-best needs k >= 1");
  std::vector<Action> out(ordered.begin(), ordered.end());
  if (k && has_prior && out.size() > static_cast<std::size_t>(*k))
    out.resize(static_cast<std::size_t>(*k));
  return out;
}

// ---------------------------------------------------------------- DepthSearch

DepthSearch::DepthSearch(const Evaluator& eval, TranspositionTable& tt, DepthSearchOptions options)
    : eval_(eval),
      tt_(tt),
      options_(options),
      batch_(eval, options.child_batching ? options.batch_workers : 1) {
  if (options_.kbest && *options_.kbest < 1) throw ConfigError("k-best needs k >= 1");
}

void DepthSearch::tick() {
  ++nodes_;
  if (tracker_ && tracker_->tick()) throw SearchAborted{};
}

void DepthSearch::require_integral() const {
  if (!eval_.integral())
    throw ConfigError("PVS and MTD(f) need an integer-valued (discretized) evaluator");
}

std::vector<Action> DepthSearch::candidate_actions(const Game& s,
                                                   const std::vector<Action>& canonical,
                                                   const TtEntry* entry, bool root) {
  auto ordered = options_.move_ordering ? order_moves(canonical, s.mover(), entry) : canonical;
  if (options_.kbest && (options_.kbest_scope == KbestScope::All || root)) {
    bool has_prior = false;
    if (entry)
      for (const auto& st : entry->actions) has_prior |= st.valued;
    ordered = kbest_restrict(ordered, options_.kbest, has_prior);
  }
  return ordered;
}

void DepthSearch::record(Game& s, const std::vector<Action>& canonical, int depth, double alpha0,
                         double beta, double best, Resolution res,
                         std::span<const std::pair<Action, double>> values,
                         std::span<const std::pair<Action, Resolution>> children) {
  const int sign = view_sign(s.mover());
  TtEntry& e = tt_.emplace(s.key());
  ensure_actions(e, canonical);
  for (const auto& [a, v] : values) {
    if (ActionStats* st = e.find(a)) {
      st->value = sign * v;
      st->valued = true;
    }
  }
  for (const auto& [a, r] : children)
    if (ActionStats* st = e.find(a)) st->resolution = r;
  if (e.resolution.is_solved()) return;
  if (res.is_solved()) {
    e.resolution = res;
    e.value = e.lower = e.upper = sign * best;
    e.depth = std::max(e.depth, depth);
    e.horizon = false;
    return;
  }
  if (depth < e.depth) return;
  double lo = -kInf, hi = kInf;
  if (best <= alpha0)
    hi = best;
  else if (best >= beta)
    lo = best;
  else
    lo = hi = best;
  e.depth = depth;
  e.value = sign * best;
  e.lower = sign > 0 ? lo : -hi;
  e.upper = sign > 0 ? hi : -lo;
  e.horizon = horizon_;
}

DepthSearch::NodeResult DepthSearch::node(Game& s, int depth, double alpha, double beta, Mode mode,
                                          bool root) {
  tick();
  const Player mover = s.mover();
  const int sign = view_sign(mover);
  if (s.ended()) return {sign * batch_.evaluate(s), Resolution::solved(s.terminal_value())};
  if (depth <= 0) {
    horizon_ = true;
    return {sign * batch_.evaluate(s), Resolution::unsolved()};
  }

  const TtEntry* entry = tt_.probe(s.key());
  if (entry) {
    if (options_.solver && !root && entry->resolution.is_solved())
      return {sign * eval_.outcome_value(entry->resolution.outcome()), entry->resolution};
    if (!root && entry->depth >= depth) {
      const double lo = sign > 0 ? entry->lower : -entry->upper;
      const double hi = sign > 0 ? entry->upper : -entry->lower;
      if (lo >= beta || hi <= alpha || lo == hi) {
        horizon_ |= entry->horizon;
        return {lo >= beta ? lo : hi, Resolution::unsolved()};
      }
    }
  }

  const auto canonical = s.actions();
  const auto actions = candidate_actions(s, canonical, entry, root);
  const bool saved_horizon = horizon_;
  horizon_ = actions.size() < canonical.size();
  bool complete = actions.size() == canonical.size();

  std::vector<std::pair<Action, double>> values;
  std::vector<std::pair<Action, Resolution>> children;
  values.reserve(actions.size());
  children.reserve(actions.size());
  double best = -kInf;

  if (options_.child_batching && depth == 1) {
    std::vector<double> raw(actions.size());
    std::vector<Resolution> res(actions.size());
    batch_.evaluate_children(s, actions, raw, res);
    for (std::size_t i = 0; i < actions.size(); ++i) {
      tick();
      const double v = sign * raw[i];
      values.emplace_back(actions[i], v);
      children.emplace_back(actions[i], res[i]);
      horizon_ |= !res[i].is_solved();
      best = std::max(best, v);
    }
  } else {
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const double floor = std::max(alpha, best);
      NodeResult r;
      double v;
      {
        Applied step(s, actions[i]);
        if (mode == Mode::Pvs && i > 0) {
          r = node(s, depth - 1, -(floor + 1), -floor, mode, false);
          v = -r.value;
          if (v > floor && v < beta) {
            r = node(s, depth - 1, -beta, -floor, mode, false);
            v = -r.value;
          }
        } else {
          r = node(s, depth - 1, -beta, -floor, mode, false);
          v = -r.value;
        }
      }
      values.emplace_back(actions[i], v);
      children.emplace_back(actions[i], r.resolution);
      best = std::max(best, v);
      if (best >= beta || (options_.solver && r.resolution.wins_for(mover))) {
        complete &= i + 1 == actions.size();
        break;
      }
    }
  }

  Resolution res = Resolution::unsolved();
  if (options_.solver) {
    std::vector<Resolution> rs;
    rs.reserve(children.size());
    for (const auto& c : children) rs.push_back(c.second);
    res = update_resolution(mover, rs, complete);
  }
  record(s, canonical, depth, alpha, beta, best, res, values, children);
  horizon_ = saved_horizon || horizon_;
  return {best, res};
}

double DepthSearch::alphabeta(Game& s, int depth, double alpha, double beta) {
  if (depth < 0) throw ContractViolation("negative search depth");
  if (!(alpha < beta)) throw ContractViolation("alpha-beta window must satisfy alpha < beta");
  horizon_ = false;
  return node(s, depth, alpha, beta, Mode::AlphaBeta, false).value;
}

double DepthSearch::pvs(Game& s, int depth, double alpha, double beta) {
  require_integral();
  if (depth < 0) throw ContractViolation("negative search depth");
  if (!(alpha < beta)) throw ContractViolation("PVS window must satisfy alpha < beta");
  horizon_ = false;
  return node(s, depth, alpha, beta, Mode::Pvs, false).value;
}

DepthSearch::MtdfOutcome DepthSearch::mtdf(Game& s, int depth, double guess) {
  require_integral();
  if (guess != std::floor(guess)) throw ConfigError("MTD(f) first guess must be an integer");
  horizon_ = false;
  MtdfOutcome out;
  double g = guess;
  double lower = -kInf, upper = kInf;
  while (lower < upper) {
    const double beta = g == lower ? g + 1 : g;
    const auto r = node(s, depth, beta - 1, beta, Mode::AlphaBeta, true);
    g = r.value;
    out.resolution = r.resolution;
    ++out.zero_window_calls;
    if (g < beta)
      upper = g;
    else
      lower = g;
  }
  out.value = g;
  return out;
}

SearchResult DepthSearch::finish_root(Game& s, int depth, Action chosen, double value,
                                      Resolution resolution,
                                      const std::vector<Candidate>& candidates) {
  SearchResult r;
  const Player mover = s.mover();
  r.action = options_.solver ? filter_decision(candidates, mover, prefer_rule(chosen)) : chosen;
  r.value = view_sign(mover) * value;
  r.depth = depth;
  r.nodes = nodes_;
  r.resolution = resolution;
  return r;
}

SearchResult DepthSearch::search_root(Game& s, int depth, Mode mode) {
  if (mode == Mode::Pvs) require_integral();
  if (depth < 1) throw ContractViolation("root search depth must be at least 1");
  if (s.ended()) throw ContractViolation("search_root on an ended position");
  horizon_ = false;
  tick();
  const Player mover = s.mover();
  const int sign = view_sign(mover);
  const auto canonical = s.actions();
  const TtEntry* entry = tt_.probe(s.key());
  const auto actions = candidate_actions(s, canonical, entry, true);
  horizon_ = actions.size() < canonical.size();
  bool complete = actions.size() == canonical.size();

  std::vector<Candidate> candidates;
  for (Action a : canonical) candidates.push_back({a, Resolution::unsolved(), -kInf, 0, 0});
  std::vector<std::pair<Action, double>> values;
  std::vector<std::pair<Action, Resolution>> children;

  double best = -kInf;
  Action chosen = actions.front();
  std::size_t chosen_ci = canonical.size();
  auto consider = [&](Action a, double v, Resolution res) {
    const std::size_t ci = canonical_index(canonical, a);
    candidates[ci].relative_value = v;
    candidates[ci].resolution = res;
    values.emplace_back(a, v);
    children.emplace_back(a, res);
    if (v > best || (v == best && ci < chosen_ci)) {
      best = v;
      chosen = a;
      chosen_ci = ci;
    }
  };

  if (options_.child_batching && depth == 1) {
    std::vector<double> raw(actions.size());
    std::vector<Resolution> res(actions.size());
    batch_.evaluate_children(s, actions, raw, res);
    for (std::size_t i = 0; i < actions.size(); ++i) {
      tick();
      horizon_ |= !res[i].is_solved();
      consider(actions[i], sign * raw[i], res[i]);
    }
  } else {
    const bool integral = eval_.integral();
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const std::size_t ci = canonical_index(canonical, actions[i]);
      double floor = -kInf;
      if (best > -kInf) {
        // Children ahead of the current choice in canonical order win ties,
        // so they are searched with a window that keeps an equal value exact.
        floor = ci < chosen_ci ? (integral ? best - 1 : std::nextafter(best, -kInf)) : best;
      }
      NodeResult r;
      double v;
      {
        Applied step(s, actions[i]);
        if (mode == Mode::Pvs && i > 0) {
          r = node(s, depth - 1, -(floor + 1), -floor, mode, false);
          v = -r.value;
          if (v > floor) {
            r = node(s, depth - 1, kInf * -1, -floor, mode, false);
            v = -r.value;
          }
        } else {
          r = node(s, depth - 1, -kInf, -floor, mode, false);
          v = -r.value;
        }
      }
      consider(actions[i], v, r.resolution);
      if (options_.solver && r.resolution.wins_for(mover)) {
        complete &= i + 1 == actions.size();
        break;
      }
    }
  }

  Resolution res = Resolution::unsolved();
  if (options_.solver) {
    std::vector<Resolution> rs;
    for (const auto& c : children) rs.push_back(c.second);
    res = update_resolution(mover, rs, complete);
  }
  record(s, canonical, depth, -kInf, kInf, best, res, values, children);
  return finish_root(s, depth, chosen, best, res, candidates);
}

SearchResult DepthSearch::search_root_mtdf(Game& s, int depth, double guess) {
  require_integral();
  if (depth < 1) throw ContractViolation("root search depth must be at least 1");
  if (s.ended()) throw ContractViolation("search_root on an ended position");
  const auto out = mtdf(s, depth, guess);
  const bool horizon = horizon_;
  const double g = out.value;

  // Lowest canonical action whose value reaches g.
  const auto canonical = s.actions();
  Action chosen = canonical.front();
  std::vector<Candidate> candidates;
  for (Action a : canonical) candidates.push_back({a, Resolution::unsolved(), -kInf, 0, 0});
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    NodeResult r;
    {
      Applied step(s, canonical[i]);
      r = node(s, depth - 1, -g, -(g - 1), Mode::AlphaBeta, false);
    }
    candidates[i].relative_value = -r.value;
    candidates[i].resolution = r.resolution;
    if (-r.value >= g) {
      chosen = canonical[i];
      break;
    }
  }
  horizon_ = horizon;
  auto result = finish_root(s, depth, chosen, g, out.resolution, candidates);
  result.trace.push_back({depth, result.value, guess, nodes_, out.zero_window_calls});
  return result;
}

SearchResult DepthSearch::iterative_deepening(Game& s, const SearchBudget& budget, Mode mode) {
  budget.validate();
  BudgetTracker tracker(budget, options_.check_interval);
  tracker_ = &tracker;
  SearchResult best;
  std::vector<IterationInfo> trace;
  for (int d = 1;; ++d) {
    if (budget.max_depth && d > *budget.max_depth) break;
    if (d > 1 && tracker.exhausted()) break;
    if (d == 1)
      tracker.disarm();
    else
      tracker.arm();
    const std::uint64_t before = nodes_;
    SearchResult r;
    try {
      r = search_root(s, d, mode);
    } catch (const SearchAborted&) {
      break;
    }
    trace.push_back({d, r.value, 0, nodes_ - before, 0});
    best = std::move(r);
    if (best.resolution.is_solved() || !horizon_) break;
  }
  tracker_ = nullptr;
  best.trace = std::move(trace);
  best.iterations = best.trace.size();
  best.nodes = tracker.nodes();
  best.seconds = tracker.elapsed();
  return best;
}

SearchResult DepthSearch::iterative_deepening_mtdf(Game& s, const SearchBudget& budget) {
  budget.validate();
  BudgetTracker tracker(budget, options_.check_interval);
  tracker_ = &tracker;
  SearchResult best;
  std::vector<IterationInfo> trace;
  double guess = 0;  // relative to the mover
  for (int d = 1;; ++d) {
    if (budget.max_depth && d > *budget.max_depth) break;
    if (d > 1 && tracker.exhausted()) break;
    if (d == 1)
      tracker.disarm();
    else
      tracker.arm();
    const std::uint64_t before = nodes_;
    SearchResult r;
    try {
      r = search_root_mtdf(s, d, guess);
    } catch (const SearchAborted&) {
      break;
    }
    IterationInfo info = r.trace.back();
    info.nodes = nodes_ - before;
    trace.push_back(info);
    guess = relative_value(r.value, s.mover());
    best = std::move(r);
    if (best.resolution.is_solved() || !horizon_) break;
  }
  tracker_ = nullptr;
  best.trace = std::move(trace);
  best.iterations = best.trace.size();
  best.nodes = tracker.nodes();
  best.seconds = tracker.elapsed();
  return best;
}

}  // namespace gsearch
