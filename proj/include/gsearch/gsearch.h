/* C interface to the gsearch library. Every function that can fail returns a
 * gsearch_status; the message of the last failure on the calling thread is
 * available from gsearch_last_error(). Handles are opaque and owned by the
 * caller, who releases them with the matching _free function. */
#ifndef GSEARCH_H
#define GSEARCH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define GSEARCH_API __attribute__((visibility("default")))
#else
#define GSEARCH_API
#endif

typedef enum gsearch_status {
  GSEARCH_OK = 0,
  GSEARCH_ERR_ARGUMENT = 1,
  GSEARCH_ERR_CONFIG = 2,
  GSEARCH_ERR_VERIFY = 3,
  GSEARCH_ERR_PROTOCOL = 4,
  GSEARCH_ERR_CONTRACT = 5,
  GSEARCH_ERR_RANGE = 6,
  GSEARCH_ERR_IO = 7,
  GSEARCH_ERR_INTERNAL = 8
} gsearch_status;

GSEARCH_API const char* gsearch_last_error(void);
GSEARCH_API const char* gsearch_version(void);

/* Receives chunks of text output (reports, summaries). */
typedef void (*gsearch_text_fn)(const char* text, void* user);

/* ---- games ---- */

typedef struct gsearch_game gsearch_game;

/* spec: "tictactoe", "breakthrough:6x6", "othello8", "hex:7x7:swap", "clobber:5x6", ... */
GSEARCH_API gsearch_status gsearch_game_new(const char* spec, gsearch_game** out);
/* One-line position notation: "<spec> <rows separated by '/'> <x|o>". */
GSEARCH_API gsearch_status gsearch_game_from_position(const char* line, gsearch_game** out);
GSEARCH_API void gsearch_game_free(gsearch_game* game);

/* Writes up to `capacity` action codes in canonical order; *count gets the total. */
GSEARCH_API gsearch_status gsearch_game_actions(const gsearch_game* game, uint32_t* actions,
                                                size_t capacity, size_t* count);
GSEARCH_API gsearch_status gsearch_game_apply(gsearch_game* game, uint32_t action);
GSEARCH_API gsearch_status gsearch_game_undo(gsearch_game* game);
GSEARCH_API int gsearch_game_ended(const gsearch_game* game);
/* First-player view, -1, 0 or 1. Fails on a position that has not ended. */
GSEARCH_API gsearch_status gsearch_game_terminal_value(const gsearch_game* game, int* value);
GSEARCH_API int gsearch_game_first_to_move(const gsearch_game* game);
GSEARCH_API uint64_t gsearch_game_key(const gsearch_game* game);
/* Copies the position notation (NUL terminated) when it fits; *needed gets its size. */
GSEARCH_API gsearch_status gsearch_game_position(const gsearch_game* game, char* buffer,
                                                 size_t capacity, size_t* needed);

/* ---- engines ---- */

typedef struct gsearch_engine gsearch_engine;

typedef struct gsearch_engine_options {
  const char* algorithm; /* "ab", "ab_batch", "pvs:100", "mtdf:100", "kbest:k=3", "ubfm", "ubfm_s",
                            "mcts:C=sqrt2", "mcts_h:C=0.3", "random", "oracle" */
  const char* game;      /* game spec the engine will play */
  int eval_count;        /* size of the evaluator family (>= 1) */
  int eval_member;       /* member used by this engine */
  uint64_t eval_seed;
  uint64_t seed;
  int batch_workers; /* threads for Child Batching (>= 1) */
} gsearch_engine_options;

GSEARCH_API void gsearch_engine_options_init(gsearch_engine_options* options);
GSEARCH_API gsearch_status gsearch_engine_new(const gsearch_engine_options* options,
                                              gsearch_engine** out);
GSEARCH_API void gsearch_engine_free(gsearch_engine* engine);

typedef struct gsearch_move {
  uint32_t action;
  double value; /* first-player view */
  int depth;
  uint64_t nodes;
  uint64_t iterations;
  double seconds;
  int solved;
  int outcome;
} gsearch_move;

/* Budget: seconds > 0 and/or nodes > 0. The game is left unchanged. */
GSEARCH_API gsearch_status gsearch_engine_choose(gsearch_engine* engine, gsearch_game* game,
                                                 double seconds, uint64_t nodes, gsearch_move* out);

/* ---- tournaments, tuning, reports, verification ---- */

typedef struct gsearch_run_options {
  const char* config_path;
  int has_seed;
  uint64_t seed;
  int workers;          /* 0 keeps the config value */
  double time_per_move; /* 0 keeps the config value */
  uint64_t node_budget; /* 0 keeps the config value */
  const char* out_path; /* NULL keeps the config value */
  int resume;
  const char* algorithms; /* NULL keeps the config candidates */
  const char* grid;       /* tuning grid; NULL uses the config's [tune] grid */
  const char* format;     /* "csv" or "md"; NULL is "md" */
  int dry_run;            /* print the schedule size only */
} gsearch_run_options;

GSEARCH_API void gsearch_run_options_init(gsearch_run_options* options);

/* Runs the tournament and writes the summary report to `sink`. Returns
 * GSEARCH_ERR_PROTOCOL when any engine forfeited by protocol violation. */
GSEARCH_API gsearch_status gsearch_run(const gsearch_run_options* options, gsearch_text_fn sink,
                                       void* user);
/* One tournament row per grid value plus the star row. */
GSEARCH_API gsearch_status gsearch_tune(const gsearch_run_options* options, gsearch_text_fn sink,
                                        void* user);
GSEARCH_API gsearch_status gsearch_report(const char* log_path, const char* format,
                                          uint64_t seed, size_t bootstrap, gsearch_text_fn sink,
                                          void* user);

typedef void (*gsearch_verify_fn)(int id, const char* name, int passed, const char* detail,
                                  double seconds, void* user);
/* Runs the verification suites; GSEARCH_ERR_VERIFY when any fails. */
GSEARCH_API gsearch_status gsearch_verify(gsearch_verify_fn each, void* user, int* failures);

#ifdef __cplusplus
}
#endif

#endif
