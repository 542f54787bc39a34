#include "gsearch/arena.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "gsearch/error.hpp"
#include "gsearch/rng.hpp"
#include "gsearch/search.hpp"

namespace gsearch {

const char* const kRecordHeader =
    "game,cand_alg,params,bench_alg,eval_i,eval_j,color,score,plies,millis,seed";

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string match_key(const MatchRecord& r) {
  std::ostringstream k;
  k << r.game << ',' << r.cand_alg << ',' << r.params << ',' << r.bench_alg << ',' << r.eval_i << ','
    << r.eval_j << ',' << (r.color == Player::First ? "first" : "second") << ',' << r.seed;
  return k.str();
}

MatchRecord label(const TournamentConfig& config, const AlgorithmSpec& cand, const ScheduledMatch& m) {
  MatchRecord r;
  r.game = config.games[m.game].to_string();
  r.cand_alg = cand.id();
  r.params = cand.params();
  r.bench_alg = config.benchmark.to_string();
  r.eval_i = m.eval_i;
  r.eval_j = m.eval_j;
  r.color = m.color;
  r.seed = m.seed;
  return r;
}

EngineSetup engine_setup(const TournamentConfig& config, const GameSpec& game,
                         const MatchSetup& setup, int member, std::uint64_t seed) {
  EngineSetup e;
  e.game = game;
  e.heuristic = std::make_shared<const EvalFn>(setup.family.members.at(static_cast<std::size_t>(member)));
  e.range = setup.range;
  e.seed = seed;
  e.batch_workers = config.batch_workers;
  e.kbest_scope = config.kbest_scope;
  e.solver = config.solver;
  e.count_expansion = config.count_expansion;
  return e;
}

}  // namespace

MatchOutcome play_match(const GameSpec& game, Engine& cand, Engine& bench, Player cand_color,
                        const SearchBudget& budget, std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  MatchOutcome out;
  out.record.game = game.to_string();
  out.record.color = cand_color;
  out.record.seed = seed;
  auto g = make_game(game);
  while (!g->ended()) {
    const bool cand_turn = g->mover() == cand_color;
    Engine& engine = cand_turn ? cand : bench;
    const char* who = cand_turn ? "candidate" : "benchmark";
    std::string problem;
    Action a;
    try {
      a = engine.choose(*g, budget);
      const auto legal = g->actions();
      if (std::find(legal.begin(), legal.end(), a) == legal.end())
        problem = std::string(who) + " played illegal action " + std::to_string(a.code);
    } catch (const std::exception& e) {
      problem = std::string(who) + " failed: " + e.what();
    }
    if (!problem.empty()) {
      out.violation = true;
      out.detail = problem + " at ply " + std::to_string(g->ply());
      out.record.score = cand_turn ? -1 : 1;
      break;
    }
    g->apply(a);
  }
  if (!out.violation) out.record.score = view_sign(cand_color) * g->terminal_value();
  out.record.plies = g->ply();
  out.record.millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
  return out;
}

std::vector<ScheduledMatch> schedule(const TournamentConfig& config,
                                     const std::vector<AlgorithmSpec>& candidates) {
  std::vector<ScheduledMatch> out;
  const int m = config.eval_count;
  for (std::size_t g = 0; g < config.games.size(); ++g)
    for (int rep = 0; rep < config.repetitions; ++rep)
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const std::uint64_t cand_hash = fnv1a(candidates[c].to_string());
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            for (Player color : {Player::First, Player::Second}) {
              ScheduledMatch s;
              s.index = out.size();
              s.game = g;
              s.repetition = rep;
              s.candidate = c;
              s.eval_i = i;
              s.eval_j = j;
              s.color = color;
              s.seed = derive_seed({config.seed, g, static_cast<std::uint64_t>(rep), cand_hash,
                                    static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j),
                                    color == Player::First ? 0u : 1u});
              out.push_back(s);
            }
      }
  return out;
}

MatchSetup match_setup(const TournamentConfig& config, std::size_t game, int repetition) {
  const GameSpec& spec = config.games.at(game);
  MatchSetup s;
  s.family = make_heuristic_family(
      spec, config.eval_count,
      derive_seed({config.eval_seed, game, static_cast<std::uint64_t>(repetition)}));
  auto start = make_game(spec);
  s.range = estimate_range(*start, config.range_samples,
                           derive_seed({config.seed, game, static_cast<std::uint64_t>(repetition), 0x7a9eULL}));
  return s;
}

TournamentResult run_tournament(const TournamentConfig& config, const RunOptions& options) {
  return run_tournament(config, config.candidates, options);
}

TournamentResult run_tournament(const TournamentConfig& config,
                                const std::vector<AlgorithmSpec>& candidates,
                                const RunOptions& options) {
  config.validate();
  if (candidates.empty()) throw ConfigError("no candidate algorithm");
  const SearchBudget budget = config.budget();
  budget.validate();
  const auto plan = schedule(config, candidates);

  std::map<std::pair<std::size_t, int>, MatchSetup> setups;
  for (const auto& m : plan)
    if (!setups.count({m.game, m.repetition}))
      setups.emplace(std::pair{m.game, m.repetition}, match_setup(config, m.game, m.repetition));

  // Surface configuration problems before any match starts.
  for (const auto& [where, setup] : setups) {
    const GameSpec& game = config.games[where.first];
    for (const auto& c : candidates) make_engine(c, engine_setup(config, game, setup, 0, 0));
    make_engine(config.benchmark, engine_setup(config, game, setup, 0, 0));
  }

  TournamentResult result;
  result.scheduled = plan.size();
  std::set<std::string> done;
  std::map<std::string, MatchRecord> previous;
  const bool append = options.resume && std::filesystem::exists(config.out);
  if (append) {
    for (auto& r : read_records_file(config.out)) previous.emplace(match_key(r), r);
  }

  std::vector<const ScheduledMatch*> todo;
  std::vector<std::optional<MatchRecord>> slots(plan.size());
  for (const auto& m : plan) {
    const auto key = match_key(label(config, candidates[m.candidate], m));
    if (auto it = previous.find(key); it != previous.end()) {
      slots[m.index] = it->second;
      ++result.skipped;
    } else {
      todo.push_back(&m);
    }
  }

  std::ofstream log(config.out, append ? std::ios::app : std::ios::trunc);
  if (!log) throw IoError("cannot write record log '" + config.out + "'");
  if (!append) log << kRecordHeader << '\n' << std::flush;
  std::ofstream violations;

  std::mutex sink;
  std::exception_ptr failure;
  std::size_t finished = 0;
  WorkerPool pool(config.workers);
  pool.run(todo.size(), [&](std::size_t t, int) {
    const ScheduledMatch& m = *todo[t];
    try {
      const GameSpec& game = config.games[m.game];
      const MatchSetup& setup = setups.at({m.game, m.repetition});
      const AlgorithmSpec& cand_spec = candidates[m.candidate];
      auto cand = make_engine(cand_spec, engine_setup(config, game, setup, m.eval_i,
                                                      derive_seed({m.seed, 1})));
      EngineSetup bench_setup = engine_setup(config, game, setup, m.eval_j, derive_seed({m.seed, 2}));
      bench_setup.child_batching = true;
      auto bench = make_engine(config.benchmark, bench_setup);
      MatchOutcome out = play_match(game, *cand, *bench, m.color, budget, m.seed);
      const MatchRecord labelled = label(config, cand_spec, m);
      out.record.cand_alg = labelled.cand_alg;
      out.record.params = labelled.params;
      out.record.bench_alg = labelled.bench_alg;
      out.record.eval_i = m.eval_i;
      out.record.eval_j = m.eval_j;

      std::lock_guard lock(sink);
      if (out.violation) {
        if (!violations.is_open()) {
          violations.open(config.out + ".violations", std::ios::app);
          if (!violations) throw IoError("cannot write violation log");
        }
        violations << format_record(out.record) << ',' << out.detail << '\n' << std::flush;
        result.violations.push_back(out);
      } else {
        log << format_record(out.record) << '\n' << std::flush;
        slots[m.index] = out.record;
      }
      ++result.played;
      ++finished;
      if (options.progress) options.progress(out, finished, todo.size());
    } catch (...) {
      std::lock_guard lock(sink);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  for (auto& s : slots)
    if (s) result.records.push_back(std::move(*s));
  return result;
}

// ---------------------------------------------------------------- record log

std::string format_record(const MatchRecord& r) {
  std::ostringstream out;
  out << r.game << ',' << r.cand_alg << ',' << r.params << ',' << r.bench_alg << ',' << r.eval_i << ','
      << r.eval_j << ',' << (r.color == Player::First ? "first" : "second") << ',' << r.score << ','
      << r.plies << ',' << r.millis << ',' << r.seed;
  return out.str();
}

MatchRecord parse_record(const std::string& line, std::size_t line_number) {
  std::vector<std::string> f;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    f.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (f.size() != 11)
    throw ConfigError("record needs 11 fields, found " + std::to_string(f.size()), line_number);
  MatchRecord r;
  try {
    r.game = f[0];
    r.cand_alg = f[1];
    r.params = f[2];
    r.bench_alg = f[3];
    r.eval_i = std::stoi(f[4]);
    r.eval_j = std::stoi(f[5]);
    if (f[6] == "first") r.color = Player::First;
    else if (f[6] == "second") r.color = Player::Second;
    else throw ConfigError("color must be 'first' or 'second'", line_number);
    r.score = std::stoi(f[7]);
    r.plies = std::stoi(f[8]);
    r.millis = std::stoll(f[9]);
    r.seed = std::stoull(f[10]);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("malformed number in record", line_number);
  }
  if (r.score < -1 || r.score > 1) throw ConfigError("score must be -1, 0 or 1", line_number);
  return r;
}

void write_records(std::ostream& out, const std::vector<MatchRecord>& records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) out << format_record(r) << '\n';
}

std::vector<MatchRecord> read_records(std::istream& in) {
  std::vector<MatchRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (n == 1) {
      if (line != kRecordHeader) throw ConfigError("record log header mismatch", n);
      continue;
    }
    out.push_back(parse_record(line, n));
  }
  return out;
}

std::vector<MatchRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open record log '" + path + "'");
  return read_records(in);
}

// ---------------------------------------------------------------- report

Report build_report(const std::vector<MatchRecord>& records, const BootstrapOptions& options) {
  std::set<std::string> games;
  std::map<std::string, std::map<std::string, Stratum>> by_alg;
  for (const auto& r : records) {
    games.insert(r.game);
    const std::string alg = r.params.empty() ? r.cand_alg : r.cand_alg + ":" + r.params;
    by_alg[alg][r.game].push_back({r.seed, static_cast<double>(r.score)});
  }
  Report report;
  report.games.assign(games.begin(), games.end());
  for (const auto& [alg, strata_map] : by_alg) {
    ReportRow row;
    row.algorithm = alg;
    std::vector<Stratum> strata;
    for (const auto& g : report.games) {
      auto it = strata_map.find(g);
      if (it == strata_map.end()) {
        row.per_game.push_back(std::nullopt);
        continue;
      }
      std::vector<double> scores;
      for (const auto& s : it->second) scores.push_back(s.score);
      row.per_game.push_back(game_performance(scores));
      strata.push_back(it->second);
    }
    row.mean = 100 * stratified_statistic(strata, options.pooled);
    const Interval ci = stratified_bootstrap_ci(strata, options);
    row.lower = 100 * ci.lower;
    row.upper = 100 * ci.upper;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace gsearch
