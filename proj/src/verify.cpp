#include "gsearch/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "gsearch/alphabeta.hpp"
#include "gsearch/bestfirst.hpp"
#include "gsearch/engine.hpp"
#include "gsearch/error.hpp"
#include "gsearch/mcts.hpp"
#include "gsearch/rng.hpp"
#include "gsearch/stats.hpp"
#include "gsearch/transposition.hpp"

namespace gsearch::verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

CriterionResult finish(CriterionResult r, const Stopwatch& clock, bool ok, std::string detail) {
  r.seconds = clock.seconds();
  r.detail = std::move(detail);
  r.passed = ok && r.seconds <= r.limit_seconds;
  if (ok && !r.passed) r.detail += "; over time limit";
  return r;
}

DepthSearchOptions exact_options() {
  DepthSearchOptions o;
  o.solver = false;
  return o;
}

std::string str(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

SemiCompletedEval family_eval(const GameSpec& spec, int count, std::uint64_t seed, int member) {
  return SemiCompletedEval(make_heuristic_family(spec, count, seed).members.at(static_cast<std::size_t>(member)));
}

}  // namespace

double TreeEval::operator()(const Game& s) const {
  return static_cast<const RandomTree&>(s).node_value();
}

double minimax(Game& s, const Evaluator& eval, std::uint64_t* nodes) {
  if (nodes) ++*nodes;
  if (s.ended()) return eval(s);
  const bool first = s.mover() == Player::First;
  double best = first ? -kInf : kInf;
  for (Action a : s.actions()) {
    s.apply(a);
    const double v = minimax(s, eval, nodes);
    s.undo();
    best = first ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

std::vector<RandomTree> tree_corpus(std::size_t count, std::uint64_t seed) {
  std::vector<RandomTree> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(derive_seed({seed, i}), 5, 5);
  return out;
}

// ---------------------------------------------------------------- tictactoe oracle

namespace {

using Board = std::array<char, 9>;

int board_winner(const Board& b) {
  static constexpr int lines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                                      {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
  for (const auto& l : lines)
    if (b[l[0]] != '.' && b[l[0]] == b[l[1]] && b[l[1]] == b[l[2]]) return b[l[0]] == 'x' ? 1 : -1;
  return 0;
}

int board_minimax(Board& b, char mover, std::map<Board, int>& memo) {
  if (auto it = memo.find(b); it != memo.end()) return it->second;
  int w = board_winner(b);
  bool full = std::find(b.begin(), b.end(), '.') == b.end();
  int v;
  if (w != 0 || full) {
    v = w;
  } else {
    v = mover == 'x' ? -2 : 2;
    for (int i = 0; i < 9; ++i) {
      if (b[i] != '.') continue;
      b[i] = mover;
      const int c = board_minimax(b, mover == 'x' ? 'o' : 'x', memo);
      b[i] = '.';
      v = mover == 'x' ? std::max(v, c) : std::min(v, c);
    }
  }
  memo[b] = v;
  return v;
}

void walk(Game& g, Board& b, std::map<Board, int>& memo, std::unordered_map<std::uint64_t, int>& out) {
  const char mover = g.mover() == Player::First ? 'x' : 'o';
  if (out.count(g.key())) return;
  out[g.key()] = board_minimax(b, mover, memo);
  if (g.ended()) return;
  for (Action a : g.actions()) {
    b[a.code] = mover;
    g.apply(a);
    walk(g, b, memo, out);
    g.undo();
    b[a.code] = '.';
  }
}

}  // namespace

TicTacToeOracle::TicTacToeOracle() {
  auto g = make_game(GameSpec::defaults(GameId::TicTacToe));
  Board b;
  b.fill('.');
  std::map<Board, int> memo;
  walk(*g, b, memo, values_);
}

std::optional<int> TicTacToeOracle::value(std::uint64_t key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- synthetic records

std::vector<MatchRecord> synthetic_records() {
  struct Alg {
    const char* id;
    const char* params;
    double win;
    double draw;
  };
  const Alg algs[] = {{"ubfm_s", "", 0.55, 0.1}, {"mcts", "C=sqrt2", 0.35, 0.1}, {"kbest", "k=3", 0.45, 0.2}};
  const char* games[] = {"breakthrough:6x6", "hex:7x7"};
  Rng rng(99);
  std::vector<MatchRecord> out;
  for (const auto& a : algs)
    for (const char* g : games)
      for (int k = 0; k < 32; ++k) {
        MatchRecord r;
        r.game = g;
        r.cand_alg = a.id;
        r.params = a.params;
        r.bench_alg = "ubfm";
        r.eval_i = (k / 2) % 4;
        r.eval_j = (k / 8) % 4;
        r.color = k % 2 ? Player::Second : Player::First;
        const double u = rng.unit();
        r.score = u < a.win ? 1 : (u < a.win + a.draw ? 0 : -1);
        r.plies = 20 + static_cast<int>(rng.below(40));
        r.millis = 0;
        r.seed = rng.below(1000000);
        out.push_back(r);
      }
  return out;
}

BootstrapOptions golden_bootstrap() {
  BootstrapOptions o;
  o.replicates = 2000;
  o.level = 0.05;
  o.seed = 7;
  return o;
}

// ---------------------------------------------------------------- criteria

CriterionResult exactness() {
  CriterionResult r{1, "exactness suite", false, true, "", 0, 30};
  Stopwatch clock;
  const TreeEval eval;
  std::size_t mismatches = 0, pruning = 0;
  std::string first_bad;
  for (auto& tree : tree_corpus()) {
    std::uint64_t mm_nodes = 0;
    const double oracle = minimax(tree, eval, &mm_nodes);
    const int sign = view_sign(tree.mover());
    std::vector<std::pair<const char*, double>> got;
    {
      TranspositionTable tt;
      DepthSearch ds(eval, tt, exact_options());
      got.emplace_back("alphabeta", sign * ds.alphabeta(tree, 5, -kInf, kInf));
      if (ds.nodes() > mm_nodes) ++pruning;
    }
    {
      TranspositionTable tt;
      DepthSearch ds(eval, tt, exact_options());
      got.emplace_back("pvs", sign * ds.pvs(tree, 5, -kInf, kInf));
    }
    {
      TranspositionTable tt;
      DepthSearch ds(eval, tt, exact_options());
      got.emplace_back("mtdf", sign * ds.mtdf(tree, 5, 0).value);
    }
    {
      TranspositionTable tt;
      auto o = exact_options();
      o.child_batching = true;
      o.batch_workers = 2;
      DepthSearch ds(eval, tt, o);
      got.emplace_back("childbatch", sign * ds.alphabeta(tree, 5, -kInf, kInf));
    }
    {
      TranspositionTable tt;
      auto o = exact_options();
      o.kbest = std::nullopt;  // k = infinity
      DepthSearch ds(eval, tt, o);
      got.emplace_back("kbest(inf)", ds.iterative_deepening(tree, SearchBudget::depth(5)).value);
    }
    for (const auto& [name, v] : got) {
      if (v != oracle) {
        if (!mismatches) first_bad = tree.id() + " " + name + "=" + str(v) + " oracle=" + str(oracle);
        ++mismatches;
      }
    }
  }
  std::string detail = "200 trees x 5 searches, mismatches=" + std::to_string(mismatches) +
                       ", alphabeta above minimax node count=" + std::to_string(pruning);
  if (mismatches) detail += "; first: " + first_bad;
  return finish(r, clock, mismatches == 0 && pruning == 0, detail);
}

CriterionResult batching_losslessness() {
  CriterionResult r{2, "child batching losslessness", false, true, "", 0, 120};
  Stopwatch clock;
  std::size_t cases = 0, mismatches = 0;
  auto compare = [&](Game& s, const Evaluator& eval, int depth, DepthSearchOptions base) {
    ++cases;
    base.child_batching = true;
    base.batch_workers = 1;
    TranspositionTable t1, t2, t3;
    DepthSearch reference(eval, t1, base);
    base.batch_workers = 4;
    DepthSearch batched(eval, t2, base);
    base.child_batching = false;
    base.batch_workers = 1;
    DepthSearch plain(eval, t3, base);
    const auto a = reference.search_root(s, depth);
    const auto b = batched.search_root(s, depth);
    const auto c = plain.search_root(s, depth);
    if (!(a.action == b.action && a.value == b.value && a.value == c.value)) ++mismatches;
  };
  const TreeEval tree_eval;
  for (auto& tree : tree_corpus()) {
    if (tree.ended()) continue;
    compare(tree, tree_eval, 5, exact_options());
  }
  const GameSpec spec = GameSpec::defaults(GameId::Breakthrough);
  const auto family = make_heuristic_family(spec, 4, 11);
  for (std::uint64_t k = 0; k < 100; ++k) {
    auto g = make_game(spec);
    Rng rng(derive_seed({77, k}));
    const auto plies = rng.below(16);
    for (std::uint64_t p = 0; p < plies; ++p) {
      const auto actions = g->actions();
      g->apply(actions[rng.below(actions.size())]);
      if (g->ended()) {
        g->undo();
        break;
      }
    }
    const SemiCompletedEval eval(family.members[k % 4]);
    compare(*g, eval, 3, DepthSearchOptions{});
  }
  return finish(r, clock, mismatches == 0,
                std::to_string(cases) + " positions (trees + breakthrough 6x6 at depth 3), mismatches=" +
                    std::to_string(mismatches));
}

CriterionResult tictactoe_optimality() {
  CriterionResult r{3, "tictactoe optimality vs oracle", false, true, "", 0, 180};
  Stopwatch clock;
  const GameSpec spec = GameSpec::defaults(GameId::TicTacToe);
  const auto family = make_heuristic_family(spec, 2, 5);
  std::ostringstream detail;
  bool ok = true;
  for (const char* name : {"ubfm", "ubfm_s", "ab"}) {
    int losses = 0, draws = 0, games = 0;
    for (std::uint64_t k = 0; k < 200; ++k) {
      EngineSetup setup;
      setup.game = spec;
      setup.heuristic = std::make_shared<const EvalFn>(family.members[0]);
      setup.seed = derive_seed({31, k});
      auto engine = make_engine(AlgorithmSpec::parse(name), setup);
      auto oracle = make_engine(AlgorithmSpec::parse("oracle"), setup);
      const auto out = play_match(spec, *engine, *oracle, k % 2 ? Player::Second : Player::First,
                                  SearchBudget::nodes(100000), setup.seed);
      ++games;
      if (out.violation || out.record.score < 0) ++losses;
      if (!out.violation && out.record.score == 0) ++draws;
    }
    ok &= losses == 0 && draws == games;
    detail << (detail.tellp() > 0 ? "; " : "") << name << ": " << games << " games, losses=" << losses << ", draws=" << draws;
  }
  return finish(r, clock, ok, detail.str());
}

CriterionResult solver_soundness() {
  CriterionResult r{4, "solver soundness (UBFM on tictactoe)", false, true, "", 0, 60};
  Stopwatch clock;
  const TicTacToeOracle oracle;
  const GameSpec spec = GameSpec::defaults(GameId::TicTacToe);
  const auto eval = family_eval(spec, 2, 5, 0);
  TranspositionTable tt;
  BestFirstSearch search(eval, tt);
  auto g = make_game(spec);
  const auto result = search.search(*g, SearchBudget::nodes(10000000), Decision::Safest);
  std::size_t solved = 0, wrong = 0, unknown = 0;
  tt.for_each([&](const TtEntry& e) {
    if (!e.resolution.is_solved()) return;
    ++solved;
    const auto v = oracle.value(e.key);
    if (!v) ++unknown;
    else if (*v != e.resolution.outcome()) ++wrong;
  });
  const bool root_ok = result.resolution == Resolution::solved(0);
  return finish(r, clock, root_ok && wrong == 0 && unknown == 0 && oracle.size() == 5478,
                "root " + std::string(root_ok ? "Solved(0)" : "not Solved(0)") + " after " +
                    std::to_string(result.iterations) + " iterations; solved entries=" +
                    std::to_string(solved) + ", wrong=" + std::to_string(wrong) +
                    ", unknown=" + std::to_string(unknown) + ", oracle positions=" +
                    std::to_string(oracle.size()));
}

CriterionResult bestfirst_identity() {
  CriterionResult r{5, "UBFM / UBFM_s identity and safe decision", false, true, "", 0, 30};
  Stopwatch clock;
  const GameSpec spec = GameSpec::defaults(GameId::Breakthrough);
  const auto eval = family_eval(spec, 3, 17, 1);
  bool trees_equal = true;
  std::size_t differing_decisions = 0;
  for (bool random_ties : {false, true}) {
    BestFirstOptions o;
    o.random_ties = random_ties;
    o.tie_seed = 5;
    TranspositionTable ta, tb;
    BestFirstSearch a(eval, ta, o), b(eval, tb, o);
    auto ga = make_game(spec);
    auto gb = make_game(spec);
    const auto ra = a.search(*ga, SearchBudget::nodes(3000), Decision::BestValue);
    const auto rb = b.search(*gb, SearchBudget::nodes(3000), Decision::Safest);
    std::ostringstream da, db;
    dump_tree(da, ta);
    dump_tree(db, tb);
    trees_equal &= da.str() == db.str() && ra.iterations == rb.iterations;
    differing_decisions += !(ra.action == rb.action);
  }

  Rng rng(4242);
  std::size_t wrong = 0;
  const double levels[] = {-0.5, -0.25, 0.0, 0.25, 0.5};
  for (int t = 0; t < 1000; ++t) {
    TtEntry e;
    const auto n = 1 + rng.below(8);
    for (std::uint64_t i = 0; i < n; ++i) {
      ActionStats st = stats_of({static_cast<std::uint32_t>(i * 3 + 1)});
      st.valued = true;
      st.value = levels[rng.below(5)];
      st.selections = static_cast<std::uint32_t>(rng.below(4));
      e.actions.push_back(st);
    }
    const Player mover = rng.below(2) ? Player::First : Player::Second;
    std::size_t best = 0;
    for (std::size_t i = 1; i < e.actions.size(); ++i) {
      const auto& x = e.actions[i];
      const auto& y = e.actions[best];
      const auto kx = std::pair(x.selections, relative_value(x.value, mover));
      const auto ky = std::pair(y.selections, relative_value(y.value, mover));
      if (kx > ky) best = i;
    }
    if (!(decide_safest(e, mover) == e.actions[best].action)) ++wrong;
  }
  return finish(r, clock, trees_equal && wrong == 0,
                std::string("trees ") + (trees_equal ? "bit-identical" : "DIFFER") +
                    " (canonical and seeded ties, 3000 iterations on breakthrough 6x6, decisions differing=" +
                    std::to_string(differing_decisions) + "); safe decision wrong on " +
                    std::to_string(wrong) + "/1000 random stat sets");
}

CriterionResult mcts_sanity() {
  CriterionResult r{6, "MCTS finds the one-move win", false, true, "", 0, 120};
  Stopwatch clock;
  auto g = make_game(GameSpec::defaults(GameId::TicTacToe));
  for (std::uint32_t c : {0u, 3u, 1u, 4u}) g->apply({c});
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    TranspositionTable tt;
    MctsOptions o;
    o.c = std::numbers::sqrt2;
    o.seed = seed;
    MonteCarloSearch search(tt, o);
    for (int i = 0; i < 10000; ++i) search.iterate(*g);
    const TtEntry* e = tt.probe(g->key());
    const ActionStats* best = &e->actions.front();
    for (const auto& st : e->actions)
      if (st.visits > best->visits) best = &st;
    hits += best->action.code == 2;
  }
  return finish(r, clock, hits >= 99,
                "winning move most selected in " + std::to_string(hits) + "/100 runs of 10^4 iterations");
}

CriterionResult mtdf_convergence() {
  CriterionResult r{7, "MTD(f) convergence", false, true, "", 0, 30};
  Stopwatch clock;
  const TreeEval eval;
  std::size_t mismatches = 0;
  std::uint64_t total_calls = 0, max_calls = 0;
  for (auto& tree : tree_corpus()) {
    TranspositionTable ta;
    DepthSearch ab(eval, ta, exact_options());
    const double expected = ab.alphabeta(tree, 5, -kInf, kInf);
    for (double f0 : {-100.0, 0.0, 100.0}) {
      TranspositionTable tt;
      DepthSearch ds(eval, tt, exact_options());
      const auto out = ds.mtdf(tree, 5, f0);
      mismatches += out.value != expected;
      total_calls += out.zero_window_calls;
      max_calls = std::max(max_calls, out.zero_window_calls);
    }
  }
  return finish(r, clock, mismatches == 0,
                "600 runs, mismatches=" + std::to_string(mismatches) + ", zero-window calls total=" +
                    std::to_string(total_calls) + " max=" + std::to_string(max_calls));
}

CriterionResult protocol_arithmetic() {
  CriterionResult r{8, "protocol arithmetic (dry-run schedule)", false, true, "", 0, 1};
  Stopwatch clock;
  TournamentConfig c;
  c.games = {GameSpec::defaults(GameId::Breakthrough)};
  c.eval_count = 15;
  c.node_budget = 1000;
  const auto candidates = parse_algorithm_list("ubfm_s");
  const auto plan = schedule(c, candidates);
  std::map<std::pair<int, int>, int> pairs;
  for (const auto& m : plan) ++pairs[{m.eval_i, m.eval_j}];
  bool balanced = pairs.size() == 225;
  for (const auto& [p, n] : pairs) balanced &= n == 2;
  c.eval_count = 2;
  const auto small = schedule(c, candidates).size();
  return finish(r, clock, plan.size() == 450 && balanced && small == 8,
                "m=15: " + std::to_string(plan.size()) + " matches over " + std::to_string(pairs.size()) +
                    " ordered pairs; m=2: " + std::to_string(small));
}

CriterionResult statistics(const std::string& golden_csv, const std::string& golden_md) {
  CriterionResult r{9, "statistics", false, true, "", 0, 60};
  Stopwatch clock;
  std::vector<double> wins(100, 1.0);
  const auto p = game_performance(wins);
  Stratum all_wins;
  for (std::uint64_t i = 0; i < 100; ++i) all_wins.push_back({i, 1.0});
  BootstrapOptions o;
  const std::vector<Stratum> s1{all_wins};
  const auto ci1 = stratified_bootstrap_ci(s1, o);
  const bool wins_ok = p.mean == 1 && p.radius == 0 && ci1.lower == 1 && ci1.upper == 1;

  Stratum balanced;
  for (std::uint64_t i = 0; i < 1000; ++i) balanced.push_back({i, i % 2 ? 1.0 : -1.0});
  const std::vector<Stratum> s2{balanced};
  const auto ci2 = stratified_bootstrap_ci(s2, o);
  const bool balanced_ok = ci2.lower <= 0 && ci2.upper >= 0 && std::abs(ci2.lower + ci2.upper) <= 0.005;

  const auto report = build_report(synthetic_records(), golden_bootstrap());
  const bool golden_ok = emit_report(report, "csv") == golden_csv && emit_report(report, "md") == golden_md;
  std::ostringstream d;
  d << "all wins: mean=" << 100 * p.mean << "% radius=" << 100 * p.radius << "% CI=(" << 100 * ci1.lower
    << "," << 100 * ci1.upper << "); balanced: CI=(" << 100 * ci2.lower << "," << 100 * ci2.upper
    << "); golden report " << (golden_ok ? "byte-identical" : "DIFFERS");
  return finish(r, clock, wins_ok && balanced_ok && golden_ok, d.str());
}

CriterionResult directional(const DirectionalOptions& options, std::string* report_md) {
  CriterionResult r{10, "directional reproduction: UBFM_s vs UBFM", false, false, "", 0, 4 * 3600.0};
  Stopwatch clock;
  TournamentConfig c;
  c.seed = options.seed;
  c.eval_seed = options.seed;
  c.repetitions = options.repetitions;
  c.workers = options.workers;
  c.out = options.out;
  for (const auto& g : options.games) c.games.push_back(GameSpec::parse(g));
  c.eval_count = options.evals;
  c.time_per_move = options.seconds_per_move;
  c.candidates = parse_algorithm_list("ubfm_s");
  c.benchmark = AlgorithmSpec::parse("ubfm");
  const auto result = run_tournament(c);
  const auto report = build_report(result.records, BootstrapOptions{});
  if (report_md) *report_md = emit_report(report, "md");
  const auto& row = report.rows.at(0);
  std::ostringstream d;
  d << result.records.size() << " games; UBFM_s mean=" << *row.mean << "% CI=(" << *row.lower << ", "
    << *row.upper << ")";
  for (std::size_t g = 0; g < report.games.size(); ++g)
    if (row.per_game[g]) d << "; " << report.games[g] << " " << format_performance(*row.per_game[g]);
  return finish(r, clock, *row.lower >= -2.0, d.str());
}

std::vector<CriterionResult> run_gating(const std::string& golden_csv, const std::string& golden_md,
                                        const std::function<void(const CriterionResult&)>& each) {
  std::vector<CriterionResult> out;
  auto add = [&](CriterionResult r) {
    if (each) each(r);
    out.push_back(std::move(r));
  };
  auto guarded = [&](int id, const char* name, auto&& f) {
    try {
      add(f());
    } catch (const std::exception& e) {
      add(CriterionResult{id, name, false, true, std::string("error: ") + e.what(), 0, 0});
    }
  };
  guarded(1, "exactness suite", exactness);
  guarded(2, "child batching losslessness", batching_losslessness);
  guarded(3, "tictactoe optimality vs oracle", tictactoe_optimality);
  guarded(4, "solver soundness (UBFM on tictactoe)", solver_soundness);
  guarded(5, "UBFM / UBFM_s identity and safe decision", bestfirst_identity);
  guarded(6, "MCTS finds the one-move win", mcts_sanity);
  guarded(7, "MTD(f) convergence", mtdf_convergence);
  guarded(8, "protocol arithmetic (dry-run schedule)", protocol_arithmetic);
  guarded(9, "statistics", [&] { return statistics(golden_csv, golden_md); });
  return out;
}

}  // namespace gsearch::verify
