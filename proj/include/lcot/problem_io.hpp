#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "lcot/invariant.hpp"
#include "lcot/martingale.hpp"
#include "lcot/monotonicity.hpp"
#include "lcot/solver.hpp"

namespace lcot {

/// Problem description loaded from a JSON file. Grid factors follow the order
/// of the marginals array; the same space may back several factors. Costs are
/// either explicit flat arrays in canonical row-major order or one of the
/// named two-factor formulas (abs_diff, sq_diff, product) over coordinates.
struct ParsedProblem {
  std::string version;
  std::vector<SpacePtr> spaces;  // file order
  GridPtr grid;
  std::vector<DiscreteMeasure> marginals;
  CostTensor cost;

  enum class ConstraintMode { none, explicit_set, martingale, group };
  ConstraintMode mode = ConstraintMode::none;
  ConstraintSet constraints;             // family handed to the solver
  std::optional<GroupAction> group;      // group mode only
  std::optional<std::string> cost_formula;

  ConstrainedProblem problem() const { return {grid, marginals, cost, constraints}; }
};

ParsedProblem parse_problem(const std::string& json_text);
std::string serialize_problem(const ParsedProblem& p);

struct CommandOptions {
  std::uint64_t seed = 42;
  double tol = 1e-7;
  int m_max = 3;
  int trials = 50;
  bool normalize_potentials = false;
};

/// Process exit code contract shared by every command.
enum class Outcome { ok = 0, input_error = 1, failed = 2, unbounded = 3 };

enum class CheckKind { feasible, monotone, marginal_compat };

/// Solve the constrained problem; the report carries the optimal coupling,
/// the dual certificate, and mode-specific diagnostics (conditional-mean
/// residual for martingale constraints, invariance residual for group ones).
std::string run_solve(const ParsedProblem& p, const CommandOptions& opts, Outcome& outcome);

/// Lower/upper expected-payoff bounds over martingale couplings, with both
/// certificates and (for two marginals) the convex-order verdict.
std::string run_bounds(const ParsedProblem& p, const CommandOptions& opts, Outcome& outcome);

std::string run_check(const ParsedProblem& p, CheckKind kind, const CommandOptions& opts,
                      Outcome& outcome);

/// Raw standard-form LP, for diagnostics: {"objective": [...], "rows": [[...]],
/// "rhs": [...]} minimizing objective . x over rows x = rhs, x >= 0.
std::string run_lp(const std::string& lp_json, Outcome& outcome);

}  // namespace lcot
