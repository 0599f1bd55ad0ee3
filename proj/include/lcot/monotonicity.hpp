#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lcot/solver.hpp"

namespace lcot {

/// A finitely supported measure given by grid multi-indices and positive
/// weights summing to one (uniform when omitted).
struct SupportSet {
  std::vector<std::vector<std::size_t>> points;
  std::vector<double> weights;  // empty means uniform 1/m

  void validate(const ProductGrid& grid) const;
  std::vector<double> effective_weights() const;
};

struct MonotonicityVerdict {
  bool passed = true;
  /// Max over tested (subset, weighting) pairs of cost(beta) - min cost over
  /// the equivalence class, clipped below at zero.
  double worst_violation = 0.0;
  /// The cheaper equivalent measure of the worst failing pair, when failed.
  std::optional<Coupling> witness;
  std::optional<SupportSet> witness_beta;
};

/// Minimizes the integrated cost over all nonnegative tensors on the candidate
/// grid sharing every factor marginal and every generator integral with beta.
/// beta itself is admissible, so this LP is never infeasible; the minimizing
/// tensor is returned alongside the value. The right-hand side of a generator
/// row is the generator's integral against beta, not necessarily zero.
std::pair<double, Coupling> equivalence_minimize(const SupportSet& beta,
                                                 GridPtr candidate_grid,
                                                 const CostTensor& cost,
                                                 const ConstraintSet& ws);

/// Support-geometry check at grid resolution: every tested measure carried by
/// a small subset of the support must be cost-minimal within its equivalence
/// class. Enumerates all subsets of size <= m_max when at most 10^4 exist,
/// otherwise samples `trials` random subsets; each subset is tested with the
/// uniform weighting plus `trials` random positive weightings. Each subset is
/// first screened by a single LP that bounds the violation over ALL
/// weightings at once; the sampled weightings run only when that bound
/// exceeds tol. Restricting the comparison measures to the candidate grid
/// makes the verdict necessary-but-conservative: a pass is a pass at grid
/// resolution. Seeded and reproducible.
MonotonicityVerdict check_cw_monotone(const std::vector<std::vector<std::size_t>>& support,
                                      const CostTensor& cost, const ConstraintSet& ws,
                                      int m_max, int trials, GridPtr candidate_grid,
                                      double tol = 1e-7, std::uint64_t seed = 42);

/// Extracts the support {x : pi(x) > 1e-9} of an optimal coupling and runs
/// check_cw_monotone against the problem's constraints on the full grid.
/// Optimal couplings must pass.
MonotonicityVerdict verify_solution_monotone(const SolveReport& report,
                                             const ConstrainedProblem& p, int m_max,
                                             int trials, double tol = 1e-7,
                                             std::uint64_t seed = 42);

}  // namespace lcot
