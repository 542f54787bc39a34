#include "gsearch/bestfirst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "gsearch/error.hpp"

namespace gsearch {

namespace {

std::vector<Candidate> root_candidates(const TtEntry& root, Player mover) {
  std::vector<Candidate> out;
  for (const auto& st : root.actions) {
    if (!st.valued) continue;
    out.push_back({st.action, st.resolution, relative_value(st.value, mover), st.selections, 0});
  }
  if (out.empty()) throw ContractViolation("decision requested with no valued root action");
  return out;
}

Action decide(const TtEntry& root, Player mover, bool solver, const BaseRule& rule) {
  const auto c = root_candidates(root, mover);
  return solver ? filter_decision(c, mover, rule) : c[rule(c)].action;
}

const TtEntry& root_entry(const TranspositionTable& tt, const Game& root) {
  const TtEntry* e = tt.probe(root.key());
  if (!e) throw ContractViolation("root has not been searched");
  return *e;
}

}  // namespace

void backup_entry(TtEntry& e, Player mover) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Resolution> rs;
  rs.reserve(e.actions.size());
  bool complete = true;
  for (const auto& st : e.actions) {
    if (st.valued)
      best = std::max(best, relative_value(st.value, mover));
    else
      complete = false;
    rs.push_back(st.resolution);
  }
  e.value = view_sign(mover) * best;
  e.resolution = update_resolution(mover, rs, complete);
}

Action decide_best_value(const TtEntry& root, Player mover, bool solver) {
  return decide(root, mover, solver, best_value_rule);
}

Action decide_safest(const TtEntry& root, Player mover, bool solver) {
  return decide(root, mover, solver, most_selected_rule);
}

Action decide_best_value(const TranspositionTable& tt, const Game& root, bool solver) {
  return decide_best_value(root_entry(tt, root), root.mover(), solver);
}

Action decide_safest(const TranspositionTable& tt, const Game& root, bool solver) {
  return decide_safest(root_entry(tt, root), root.mover(), solver);
}

BestFirstSearch::BestFirstSearch(const Evaluator& eval, TranspositionTable& tt,
                                 BestFirstOptions options)
    : eval_(eval),
      tt_(tt),
      options_(options),
      batch_(eval, options.child_batching ? options.batch_workers : 1),
      ties_(options.tie_seed) {}

std::size_t BestFirstSearch::select(const TtEntry& e, Player mover) {
  bool any_open = false;
  for (const auto& st : e.actions) any_open |= !st.resolution.is_solved();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < e.actions.size(); ++i) {
    const auto& st = e.actions[i];
    if (!st.valued || (any_open && st.resolution.is_solved())) continue;
    const double v = relative_value(st.value, mover);
    if (v > best) {
      best = v;
      tied.assign(1, i);
    } else if (v == best) {
      tied.push_back(i);
    }
  }
  if (tied.empty()) throw ContractViolation("best-first descent reached a state without values");
  if (options_.random_ties && tied.size() > 1) return tied[ties_.below(tied.size())];
  return tied.front();
}

void BestFirstSearch::expand(Game& s, TtEntry& e) {
  const auto actions = s.actions();
  if (e.actions.size() != actions.size()) {
    e.actions.clear();
    for (Action a : actions) e.actions.push_back(stats_of(a));
  }
  std::vector<double> values(actions.size());
  std::vector<Resolution> res(actions.size());
  batch_.evaluate_children(s, actions, values, res);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    e.actions[i].value = values[i];
    e.actions[i].valued = true;
    e.actions[i].resolution = res[i];
  }
  e.expanded = true;
  backup_entry(e, s.mover());
  if (options_.count_expansion) ++e.actions[select(e, s.mover())].selections;
}

void BestFirstSearch::iterate(Game& root) {
  if (root.ended()) throw ContractViolation("best-first search from an ended position");
  std::vector<Step> path;
  TtEntry* e = &tt_.emplace(root.key());
  while (e->expanded && !root.ended()) {
    const std::size_t i = select(*e, root.mover());
    ++e->actions[i].selections;
    path.push_back({root.key(), i, root.mover()});
    root.apply(e->actions[i].action);
    e = &tt_.emplace(root.key());
  }
  if (root.ended()) {
    e->value = eval_(root);
    e->resolution = Resolution::solved(root.terminal_value());
  } else {
    expand(root, *e);
  }

  // Back the new values up the descent path.
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const TtEntry* child = tt_.probe(root.key());
    root.undo();
    TtEntry* parent = tt_.probe(it->key);
    if (!child || !parent) continue;
    auto& st = parent->actions[it->index];
    st.value = child->value;
    st.resolution = child->resolution;
    backup_entry(*parent, it->mover);
  }
  ++iterations_;
  if (options_.audit) audit(path);
}

void BestFirstSearch::audit(const std::vector<Step>& path) {
  for (const auto& step : path) {
    const TtEntry* e = tt_.probe(step.key);
    if (!e) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& st : e->actions)
      if (st.valued) best = std::max(best, relative_value(st.value, step.mover));
    if (relative_value(e->value, step.mover) != best) ++audit_failures_;
  }
}

SearchResult BestFirstSearch::search(Game& root, const SearchBudget& budget, Decision decision) {
  budget.validate();
  BudgetTracker tracker(budget, 1);
  const std::uint64_t before = iterations_;
  const TtEntry* e = tt_.probe(root.key());
  if (!e || !e->expanded || !e->resolution.is_solved()) {
    tracker.disarm();
    tracker.tick();
    iterate(root);
    tracker.arm();
    for (;;) {
      e = tt_.probe(root.key());
      if (e->resolution.is_solved()) break;
      if (tracker.tick()) break;
      iterate(root);
    }
  }
  e = tt_.probe(root.key());
  SearchResult r;
  const Player mover = root.mover();
  r.action = decision == Decision::Safest ? decide_safest(*e, mover, options_.solver)
                                          : decide_best_value(*e, mover, options_.solver);
  r.value = e->value;
  r.resolution = e->resolution;
  r.iterations = iterations_ - before;
  r.nodes = r.iterations;
  r.seconds = tracker.elapsed();
  return r;
}

void dump_tree(std::ostream& out, const TranspositionTable& tt) {
  std::vector<const TtEntry*> entries;
  tt.for_each([&](const TtEntry& e) {
    if (e.expanded) entries.push_back(&e);
  });
  std::sort(entries.begin(), entries.end(),
            [](const TtEntry* a, const TtEntry* b) { return a->key < b->key; });
  for (const TtEntry* e : entries) {
    out << e->key << " r=";
    if (e->resolution.is_solved())
      out << e->resolution.outcome();
    else
      out << '?';
    out << " v=" << e->value;
    for (const auto& st : e->actions) out << ' ' << st.action.code << ':' << st.value << ':' << st.selections;
    out << '\n';
  }
}

}  // namespace gsearch
