#include "lcot.h"

#include <cstdlib>
#include <cstring>
#include <new>

#include "lcot/problem_io.hpp"

struct lcot_problem {
  lcot::ParsedProblem parsed;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** errmsg, const std::string& msg) {
  if (errmsg) *errmsg = dup_string(msg);
}

lcot::CommandOptions to_options(const lcot_options* opts) {
  lcot::CommandOptions out;
  if (opts) {
    out.seed = opts->seed;
    out.tol = opts->tol;
    out.m_max = opts->m_max;
    out.trials = opts->trials;
    out.normalize_potentials = opts->normalize_potentials != 0;
  }
  return out;
}

template <typename Fn>
lcot_rc guarded(char** errmsg, Fn&& fn) {
  try {
    return fn();
  } catch (const lcot::parse_error& e) {
    set_error(errmsg, e.what());
    return LCOT_RC_PARSE;
  } catch (const lcot::validation_error& e) {
    set_error(errmsg, e.what());
    return LCOT_RC_VALIDATION;
  } catch (const lcot::numeric_error& e) {
    set_error(errmsg, e.what());
    return LCOT_RC_NUMERIC;
  } catch (const std::bad_alloc&) {
    set_error(errmsg, "out of memory");
    return LCOT_RC_INTERNAL;
  } catch (const std::exception& e) {
    set_error(errmsg, e.what());
    return LCOT_RC_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* lcot_version(void) { return "1.0.0"; }

void lcot_options_init(lcot_options* opts) {
  if (!opts) return;
  opts->seed = 42;
  opts->tol = 1e-7;
  opts->m_max = 3;
  opts->trials = 50;
  opts->normalize_potentials = 0;
}

lcot_rc lcot_problem_parse(const char* json_text, lcot_problem** out, char** errmsg) {
  if (!json_text || !out) {
    set_error(errmsg, "lcot_problem_parse: null argument");
    return LCOT_RC_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errmsg, [&] {
    auto* handle = new lcot_problem{lcot::parse_problem(json_text)};
    *out = handle;
    return LCOT_RC_OK;
  });
}

void lcot_problem_free(lcot_problem* problem) { delete problem; }

lcot_rc lcot_problem_to_json(const lcot_problem* problem, char** json_out) {
  if (!problem || !json_out) return LCOT_RC_ARGUMENT;
  return guarded(nullptr, [&] {
    *json_out = dup_string(lcot::serialize_problem(problem->parsed));
    return *json_out ? LCOT_RC_OK : LCOT_RC_INTERNAL;
  });
}

lcot_rc lcot_solve(const lcot_problem* problem, const lcot_options* opts,
                   lcot_outcome* outcome, char** report_json, char** errmsg) {
  if (!problem || !outcome || !report_json) {
    set_error(errmsg, "lcot_solve: null argument");
    return LCOT_RC_ARGUMENT;
  }
  return guarded(errmsg, [&] {
    lcot::Outcome oc = lcot::Outcome::ok;
    const std::string report = lcot::run_solve(problem->parsed, to_options(opts), oc);
    *outcome = static_cast<lcot_outcome>(oc);
    *report_json = dup_string(report);
    return *report_json ? LCOT_RC_OK : LCOT_RC_INTERNAL;
  });
}

lcot_rc lcot_check(const lcot_problem* problem, lcot_check_kind kind,
                   const lcot_options* opts, lcot_outcome* outcome, char** report_json,
                   char** errmsg) {
  if (!problem || !outcome || !report_json) {
    set_error(errmsg, "lcot_check: null argument");
    return LCOT_RC_ARGUMENT;
  }
  lcot::CheckKind ck;
  switch (kind) {
    case LCOT_CHECK_FEASIBLE: ck = lcot::CheckKind::feasible; break;
    case LCOT_CHECK_MONOTONE: ck = lcot::CheckKind::monotone; break;
    case LCOT_CHECK_MARGINAL_COMPAT: ck = lcot::CheckKind::marginal_compat; break;
    default:
      set_error(errmsg, "lcot_check: unknown check kind");
      return LCOT_RC_ARGUMENT;
  }
  return guarded(errmsg, [&] {
    lcot::Outcome oc = lcot::Outcome::ok;
    const std::string report = lcot::run_check(problem->parsed, ck, to_options(opts), oc);
    *outcome = static_cast<lcot_outcome>(oc);
    *report_json = dup_string(report);
    return *report_json ? LCOT_RC_OK : LCOT_RC_INTERNAL;
  });
}

lcot_rc lcot_bounds(const lcot_problem* problem, const lcot_options* opts,
                    lcot_outcome* outcome, char** report_json, char** errmsg) {
  if (!problem || !outcome || !report_json) {
    set_error(errmsg, "lcot_bounds: null argument");
    return LCOT_RC_ARGUMENT;
  }
  return guarded(errmsg, [&] {
    lcot::Outcome oc = lcot::Outcome::ok;
    const std::string report = lcot::run_bounds(problem->parsed, to_options(opts), oc);
    *outcome = static_cast<lcot_outcome>(oc);
    *report_json = dup_string(report);
    return *report_json ? LCOT_RC_OK : LCOT_RC_INTERNAL;
  });
}

lcot_rc lcot_solve_lp(const char* lp_json, lcot_outcome* outcome, char** report_json,
                      char** errmsg) {
  if (!lp_json || !outcome || !report_json) {
    set_error(errmsg, "lcot_solve_lp: null argument");
    return LCOT_RC_ARGUMENT;
  }
  return guarded(errmsg, [&] {
    lcot::Outcome oc = lcot::Outcome::ok;
    const std::string report = lcot::run_lp(lp_json, oc);
    *outcome = static_cast<lcot_outcome>(oc);
    *report_json = dup_string(report);
    return *report_json ? LCOT_RC_OK : LCOT_RC_INTERNAL;
  });
}

void lcot_string_free(char* s) { std::free(s); }

}  // extern "C"
