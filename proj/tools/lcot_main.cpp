// Command-line front end for the lcot shared library. Talks to the solver
// exclusively through the C API in lcot.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lcot.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int write_report(const char* report, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(report, 1, std::strlen(report), stdout);
    std::fputc('\n', stdout);
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file '" << out_path << "'\n";
    return kExitInputError;
  }
  out << report << '\n';
  return kExitOk;
}

struct ProblemHandle {
  lcot_problem* p = nullptr;
  ~ProblemHandle() { lcot_problem_free(p); }
};

int load_problem(const std::string& path, ProblemHandle& handle) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return kExitInputError;
  }
  char* errmsg = nullptr;
  const lcot_rc rc = lcot_problem_parse(text.c_str(), &handle.p, &errmsg);
  if (rc != LCOT_RC_OK) {
    std::cerr << "error: " << (errmsg ? errmsg : "failed to parse problem") << "\n";
    lcot_string_free(errmsg);
    return kExitInputError;
  }
  return kExitOk;
}

int finish(lcot_rc rc, lcot_outcome outcome, char* report, char* errmsg,
           const std::string& out_path) {
  if (rc != LCOT_RC_OK) {
    std::cerr << "error: " << (errmsg ? errmsg : "command failed") << "\n";
    lcot_string_free(errmsg);
    lcot_string_free(report);
    return kExitInputError;
  }
  const int write_rc = write_report(report, out_path);
  lcot_string_free(report);
  return write_rc != kExitOk ? write_rc : static_cast<int>(outcome);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lcot: discrete optimal transport with linear constraints"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string out_path;
  lcot_options opts;
  lcot_options_init(&opts);
  bool normalize = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("problem", problem_path, "problem JSON file")->required();
    cmd->add_option("--out", out_path, "write the report here instead of stdout");
    cmd->add_option("--seed", opts.seed, "RNG seed for sampled checks");
    cmd->add_option("--tol", opts.tol, "violation tolerance");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve the constrained problem");
  add_common(solve);
  solve->add_flag("--normalize-potentials", normalize,
                  "shift dual potentials so f_k(first point) = 0 for k >= 2");

  CLI::App* check = app.add_subcommand("check", "run a diagnostic check");
  add_common(check);
  bool check_feasible = false, check_monotone = false, check_marginal = false;
  check->add_flag("--feasible", check_feasible, "is the admissible set nonempty?");
  check->add_flag("--monotone", check_monotone,
                  "does the optimal support pass the monotonicity check?");
  check->add_flag("--marginal-compat", check_marginal,
                  "do single-coordinate generators integrate to zero?");
  check->add_option("--m-max", opts.m_max, "largest tested subset size");
  check->add_option("--trials", opts.trials, "sampled subsets/weightings per subset");

  CLI::App* bounds = app.add_subcommand("bounds", "martingale price bounds");
  add_common(bounds);
  bounds->add_flag("--normalize-potentials", normalize,
                   "shift dual potentials so f_k(first point) = 0 for k >= 2");

  CLI::App* lp = app.add_subcommand("lp", "solve a raw standard-form LP (diagnostic)");
  lp->add_option("problem", problem_path, "LP JSON file")->required();
  lp->add_option("--out", out_path, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }
  opts.normalize_potentials = normalize ? 1 : 0;

  lcot_outcome outcome = LCOT_OUTCOME_OK;
  char* report = nullptr;
  char* errmsg = nullptr;

  if (lp->parsed()) {
    std::string text;
    if (!read_file(problem_path, text)) {
      std::cerr << "error: cannot read '" << problem_path << "'\n";
      return kExitInputError;
    }
    const lcot_rc rc = lcot_solve_lp(text.c_str(), &outcome, &report, &errmsg);
    return finish(rc, outcome, report, errmsg, out_path);
  }

  ProblemHandle handle;
  if (const int rc = load_problem(problem_path, handle); rc != kExitOk) return rc;

  if (solve->parsed()) {
    const lcot_rc rc = lcot_solve(handle.p, &opts, &outcome, &report, &errmsg);
    return finish(rc, outcome, report, errmsg, out_path);
  }
  if (bounds->parsed()) {
    const lcot_rc rc = lcot_bounds(handle.p, &opts, &outcome, &report, &errmsg);
    return finish(rc, outcome, report, errmsg, out_path);
  }
  if (check->parsed()) {
    const int selected = (check_feasible ? 1 : 0) + (check_monotone ? 1 : 0) +
                         (check_marginal ? 1 : 0);
    if (selected != 1) {
      std::cerr << "error: pick exactly one of --feasible, --monotone, --marginal-compat\n";
      return kExitInputError;
    }
    const lcot_check_kind kind = check_feasible    ? LCOT_CHECK_FEASIBLE
                                 : check_monotone  ? LCOT_CHECK_MONOTONE
                                                   : LCOT_CHECK_MARGINAL_COMPAT;
    const lcot_rc rc = lcot_check(handle.p, kind, &opts, &outcome, &report, &errmsg);
    return finish(rc, outcome, report, errmsg, out_path);
  }
  return kExitInputError;
}
