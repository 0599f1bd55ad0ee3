/* lcot — discrete optimal transport with linear constraints.
 *
 * C interface to the solver library. Problems are JSON documents (see
 * README.md for the schema); handles are opaque and must be released with
 * lcot_problem_free. Report strings are heap-allocated JSON owned by the
 * caller; release them with lcot_string_free.
 *
 * Every entry point returns an lcot_rc. On LCOT_RC_OK the command-level
 * result is in *outcome: 0 optimal/pass, 2 infeasible/fail, 3 unbounded.
 * On any other return code *errmsg (when non-NULL) receives a heap-allocated
 * description.
 */
#ifndef LCOT_H
#define LCOT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct lcot_problem lcot_problem;

typedef enum lcot_rc {
  LCOT_RC_OK = 0,
  LCOT_RC_ARGUMENT = 1,   /* null pointer or bad enum value */
  LCOT_RC_PARSE = 2,      /* malformed input file */
  LCOT_RC_VALIDATION = 3, /* well-formed input violating an invariant */
  LCOT_RC_NUMERIC = 4,    /* solver breakdown, reported rather than silent */
  LCOT_RC_INTERNAL = 5
} lcot_rc;

typedef enum lcot_outcome {
  LCOT_OUTCOME_OK = 0,        /* optimal / check passed */
  LCOT_OUTCOME_FAILED = 2,    /* infeasible / check failed */
  LCOT_OUTCOME_UNBOUNDED = 3
} lcot_outcome;

typedef enum lcot_check_kind {
  LCOT_CHECK_FEASIBLE = 0,
  LCOT_CHECK_MONOTONE = 1,
  LCOT_CHECK_MARGINAL_COMPAT = 2
} lcot_check_kind;

typedef struct lcot_options {
  uint64_t seed;              /* default 42 */
  double tol;                 /* default 1e-7 */
  int m_max;                  /* default 3 */
  int trials;                 /* default 50 */
  int normalize_potentials;   /* default 0 */
} lcot_options;

const char* lcot_version(void);

void lcot_options_init(lcot_options* opts);

lcot_rc lcot_problem_parse(const char* json_text, lcot_problem** out, char** errmsg);
void lcot_problem_free(lcot_problem* problem);

/* Canonical serialization of a parsed problem (round-trips bit-exactly). */
lcot_rc lcot_problem_to_json(const lcot_problem* problem, char** json_out);

lcot_rc lcot_solve(const lcot_problem* problem, const lcot_options* opts,
                   lcot_outcome* outcome, char** report_json, char** errmsg);

lcot_rc lcot_check(const lcot_problem* problem, lcot_check_kind kind,
                   const lcot_options* opts, lcot_outcome* outcome, char** report_json,
                   char** errmsg);

/* Martingale price interval; the problem must declare martingale constraints. */
lcot_rc lcot_bounds(const lcot_problem* problem, const lcot_options* opts,
                    lcot_outcome* outcome, char** report_json, char** errmsg);

/* Raw standard-form LP (diagnostic): {"objective": [...], "rows": [[...]],
 * "rhs": [...]} minimizing objective.x over rows x = rhs, x >= 0. */
lcot_rc lcot_solve_lp(const char* lp_json, lcot_outcome* outcome, char** report_json,
                      char** errmsg);

void lcot_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LCOT_H */
