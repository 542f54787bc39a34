#include "gsearch/gsearch.h"

#include <cstring>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "gsearch/arena.hpp"
#include "gsearch/config.hpp"
#include "gsearch/engine.hpp"
#include "gsearch/error.hpp"
#include "gsearch/stats.hpp"
#include "gsearch/verify.hpp"
#include "gsearch_golden.hpp"

struct gsearch_game {
  std::unique_ptr<gsearch::Game> game;
};

struct gsearch_engine {
  gsearch::GameSpec spec;
  std::unique_ptr<gsearch::Engine> engine;
};

namespace {

thread_local std::string last_error;

gsearch_status fail(gsearch_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
gsearch_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const gsearch::ConfigError& e) {
    return fail(GSEARCH_ERR_CONFIG, e.what());
  } catch (const gsearch::IoError& e) {
    return fail(GSEARCH_ERR_IO, e.what());
  } catch (const gsearch::DegenerateRange& e) {
    return fail(GSEARCH_ERR_RANGE, e.what());
  } catch (const gsearch::ContractViolation& e) {
    return fail(GSEARCH_ERR_CONTRACT, e.what());
  } catch (const std::exception& e) {
    return fail(GSEARCH_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GSEARCH_ERR_INTERNAL, "unknown error");
  }
}

void emit(gsearch_text_fn sink, void* user, const std::string& text) {
  if (sink) sink(text.c_str(), user);
}

gsearch::TournamentConfig effective_config(const gsearch_run_options& o) {
  if (!o.config_path) throw gsearch::ConfigError("no config file given");
  auto c = gsearch::load_tournament_config(o.config_path);
  if (o.has_seed) c.seed = o.seed;
  if (o.workers > 0) c.workers = o.workers;
  if (o.time_per_move > 0) c.time_per_move = o.time_per_move;
  if (o.node_budget > 0) c.node_budget = o.node_budget;
  if (o.out_path) c.out = o.out_path;
  if (o.algorithms) c.candidates = gsearch::parse_algorithm_list(o.algorithms);
  if (o.grid) c.grid = o.grid;
  c.validate();
  return c;
}

gsearch::BootstrapOptions bootstrap_of(const gsearch::StatsConfig& s) {
  gsearch::BootstrapOptions b;
  b.replicates = s.bootstrap;
  b.level = s.level;
  b.seed = s.seed;
  b.pooled = s.pooled;
  return b;
}

std::string format_of(const gsearch_run_options& o) { return o.format ? o.format : "md"; }

std::string dry_run_summary(const gsearch::TournamentConfig& c,
                            const std::vector<gsearch::AlgorithmSpec>& candidates) {
  const auto plan = gsearch::schedule(c, candidates);
  std::map<std::string, std::size_t> per_game;
  for (const auto& m : plan) ++per_game[c.games[m.game].to_string()];
  std::ostringstream out;
  out << "scheduled " << plan.size() << " matches (" << candidates.size() << " candidate(s), m="
      << c.eval_count << ", " << c.repetitions << " repetition(s))\n";
  for (const auto& [g, n] : per_game) out << "  " << g << ": " << n << '\n';
  return out.str();
}

gsearch_status run_and_report(const gsearch_run_options* options, gsearch_text_fn sink, void* user,
                              bool tuning) {
  if (!options) return fail(GSEARCH_ERR_ARGUMENT, "null options");
  const auto c = effective_config(*options);
  const std::string format = format_of(*options);
  if (format != "csv" && format != "md") throw gsearch::ConfigError("unknown report format '" + format + "'");
  const auto candidates = tuning ? gsearch::expand_grid(c.grid) : c.candidates;
  if (candidates.empty()) throw gsearch::ConfigError("no candidate algorithm");
  if (options->dry_run) {
    emit(sink, user, dry_run_summary(c, candidates));
    return GSEARCH_OK;
  }
  gsearch::RunOptions run;
  run.resume = options->resume != 0;
  const auto result = gsearch::run_tournament(c, candidates, run);
  auto report = gsearch::build_report(result.records, bootstrap_of(c.stats));
  if (tuning) report.rows.push_back(gsearch::star_row(report));
  std::ostringstream head;
  head << "played " << result.played << " of " << result.scheduled << " matches";
  if (result.skipped) head << " (" << result.skipped << " resumed from the log)";
  head << "; records in " << c.out << '\n';
  emit(sink, user, head.str());
  emit(sink, user, gsearch::emit_report(report, format));
  if (!result.violations.empty()) {
    std::ostringstream v;
    v << result.violations.size() << " protocol violation(s), see " << c.out << ".violations\n";
    return fail(GSEARCH_ERR_PROTOCOL, v.str());
  }
  return GSEARCH_OK;
}

}  // namespace

extern "C" {

const char* gsearch_last_error(void) { return last_error.c_str(); }

const char* gsearch_version(void) { return "1.0.0"; }

gsearch_status gsearch_game_new(const char* spec, gsearch_game** out) {
  if (!spec || !out) return fail(GSEARCH_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new gsearch_game{gsearch::make_game(gsearch::GameSpec::parse(spec))};
    return GSEARCH_OK;
  });
}

gsearch_status gsearch_game_from_position(const char* line, gsearch_game** out) {
  if (!line || !out) return fail(GSEARCH_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new gsearch_game{gsearch::parse_position(line)};
    return GSEARCH_OK;
  });
}

void gsearch_game_free(gsearch_game* game) { delete game; }

gsearch_status gsearch_game_actions(const gsearch_game* game, uint32_t* actions, size_t capacity,
                                    size_t* count) {
  if (!game || !count || (capacity && !actions)) return fail(GSEARCH_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto list = game->game->actions();
    *count = list.size();
    for (size_t i = 0; i < list.size() && i < capacity; ++i) actions[i] = list[i].code;
    return GSEARCH_OK;
  });
}

gsearch_status gsearch_game_apply(gsearch_game* game, uint32_t action) {
  if (!game) return fail(GSEARCH_ERR_ARGUMENT, "null game");
  return guarded([&] {
    game->game->apply({action});
    return GSEARCH_OK;
  });
}

gsearch_status gsearch_game_undo(gsearch_game* game) {
  if (!game) return fail(GSEARCH_ERR_ARGUMENT, "null game");
  return guarded([&] {
    game->game->undo();
    return GSEARCH_OK;
  });
}

int gsearch_game_ended(const gsearch_game* game) { return game && game->game->ended() ? 1 : 0; }

gsearch_status gsearch_game_terminal_value(const gsearch_game* game, int* value) {
  if (!game || !value) return fail(GSEARCH_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *value = game->game->terminal_value();
    return GSEARCH_OK;
  });
}

int gsearch_game_first_to_move(const gsearch_game* game) {
  return game && game->game->mover() == gsearch::Player::First ? 1 : 0;
}

uint64_t gsearch_game_key(const gsearch_game* game) { return game ? game->game->key() : 0; }

gsearch_status gsearch_game_position(const gsearch_game* game, char* buffer, size_t capacity,
                                     size_t* needed) {
  if (!game || !needed || (capacity && !buffer)) return fail(GSEARCH_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string text = gsearch::format_position(*game->game);
    *needed = text.size() + 1;
    if (capacity >= text.size() + 1) std::memcpy(buffer, text.c_str(), text.size() + 1);
    return GSEARCH_OK;
  });
}

void gsearch_engine_options_init(gsearch_engine_options* options) {
  if (!options) return;
  *options = gsearch_engine_options{"ubfm_s", "tictactoe", 1, 0, 1, 1, 1};
}

gsearch_status gsearch_engine_new(const gsearch_engine_options* options, gsearch_engine** out) {
  if (!options || !out || !options->algorithm || !options->game)
    return fail(GSEARCH_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (options->eval_count < 1 || options->eval_member < 0 || options->eval_member >= options->eval_count)
      throw gsearch::ConfigError("eval_member must lie in [0, eval_count)");
    if (options->batch_workers < 1) throw gsearch::ConfigError("batch_workers must be >= 1");
    const auto spec = gsearch::GameSpec::parse(options->game);
    const auto family = gsearch::make_heuristic_family(spec, options->eval_count, options->eval_seed);
    gsearch::EngineSetup setup;
    setup.game = spec;
    setup.heuristic = std::make_shared<const gsearch::EvalFn>(
        family.members[static_cast<std::size_t>(options->eval_member)]);
    auto start = gsearch::make_game(spec);
    setup.range = gsearch::estimate_range(*start, 2000, options->seed);
    setup.seed = options->seed;
    setup.batch_workers = options->batch_workers;
    auto engine = gsearch::make_engine(gsearch::AlgorithmSpec::parse(options->algorithm), setup);
    *out = new gsearch_engine{spec, std::move(engine)};
    return GSEARCH_OK;
  });
}

void gsearch_engine_free(gsearch_engine* engine) { delete engine; }

gsearch_status gsearch_engine_choose(gsearch_engine* engine, gsearch_game* game, double seconds,
                                     uint64_t nodes, gsearch_move* out) {
  if (!engine || !game || !out) return fail(GSEARCH_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    gsearch::SearchBudget budget;
    if (seconds > 0) budget.seconds = seconds;
    if (nodes > 0) budget.max_nodes = nodes;
    const auto a = engine->engine->choose(*game->game, budget);
    const auto& r = engine->engine->last();
    *out = gsearch_move{a.code, r.value, r.depth, r.nodes, r.iterations, r.seconds,
                        r.resolution.is_solved() ? 1 : 0, r.resolution.outcome()};
    return GSEARCH_OK;
  });
}

void gsearch_run_options_init(gsearch_run_options* options) {
  if (options) *options = gsearch_run_options{};
}

gsearch_status gsearch_run(const gsearch_run_options* options, gsearch_text_fn sink, void* user) {
  return guarded([&] { return run_and_report(options, sink, user, false); });
}

gsearch_status gsearch_tune(const gsearch_run_options* options, gsearch_text_fn sink, void* user) {
  return guarded([&] { return run_and_report(options, sink, user, true); });
}

gsearch_status gsearch_report(const char* log_path, const char* format, uint64_t seed, size_t bootstrap,
                              gsearch_text_fn sink, void* user) {
  if (!log_path) return fail(GSEARCH_ERR_ARGUMENT, "null log path");
  return guarded([&] {
    gsearch::BootstrapOptions b;
    b.seed = seed;
    if (bootstrap) b.replicates = bootstrap;
    const auto report = gsearch::build_report(gsearch::read_records_file(log_path), b);
    emit(sink, user, gsearch::emit_report(report, format ? format : "md"));
    return GSEARCH_OK;
  });
}

gsearch_status gsearch_verify(gsearch_verify_fn each, void* user, int* failures) {
  return guarded([&] {
    int failed = 0;
    gsearch::verify::run_gating(gsearch::golden::kReportCsv, gsearch::golden::kReportMd,
                                [&](const gsearch::verify::CriterionResult& r) {
                                  failed += !r.passed;
                                  if (each)
                                    each(r.id, r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(),
                                         r.seconds, user);
                                });
    if (failures) *failures = failed;
    return failed ? fail(GSEARCH_ERR_VERIFY, std::to_string(failed) + " suite(s) failed")
                  : GSEARCH_OK;
  });
}

}  // extern "C"
