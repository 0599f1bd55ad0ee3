#pragma once

#include <optional>

#include "lcot/solver.hpp"

namespace lcot {

/// Multi-period pricing instance: one marginal per time step on spaces with
/// real coordinates, and a payoff tensor over the path grid.
struct MartingaleProblem {
  GridPtr grid;
  std::vector<DiscreteMeasure> marginals;
  CostTensor payoff;

  void validate() const;
};

/// One generator per step k and per prefix cell (x_1, ..., x_k), with values
/// (x_{k+1} - x_k) on cells extending the prefix and zero elsewhere.
/// Indicator test functions make this family exact on a finite grid: a
/// coupling vanishes against all of them iff the conditional mean of the next
/// coordinate equals the current one wherever the prefix carries mass.
/// Generator count is sum over k of the prefix-grid sizes.
ConstraintSet martingale_generators(GridPtr grid);

struct ConvexOrderResult {
  bool ordered = false;
  double mean_first = 0.0;
  double mean_second = 0.0;
  /// Strike where the call-function comparison fails, when not ordered for
  /// that reason; absent when the means already disagree.
  std::optional<double> witness_strike;
  double call_first = 0.0;
  double call_second = 0.0;
};

/// Necessary and sufficient two-marginal feasibility test: equal means and
/// call-function domination at every strike in the union of support points
/// (piecewise-linear call functions make those strikes sufficient).
ConvexOrderResult convex_order_check(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2);

struct PriceBounds {
  double lower = 0.0;
  double upper = 0.0;
  SolveReport lower_report;
  SolveReport upper_report;
  bool feasible = false;
};

/// Model-free price interval: minimize and maximize the expected payoff over
/// all martingale couplings of the marginals. Each report carries its own
/// dual certificate (potentials per step plus one multiplier per prefix
/// generator). Infeasible marginals yield infeasible reports.
PriceBounds price_bounds(const MartingaleProblem& p, bool normalize_potentials = false);

/// Max over steps k and prefix cells with mass > 1e-12 of
/// |sum over extensions of pi * (x_{k+1} - x_k)| / prefix mass.
double conditional_mean_residual(const Coupling& pi);

}  // namespace lcot
