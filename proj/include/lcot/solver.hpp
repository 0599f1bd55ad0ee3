#pragma once

#include <optional>
#include <vector>

#include "lcot/constraints.hpp"
#include "lcot/lp.hpp"
#include "lcot/measures.hpp"

namespace lcot {

/// Problem data: marginals on the grid factors, a cost tensor, and the
/// constraint family. The coupling sought minimizes the integrated cost over
/// all nonnegative tensors with the prescribed marginals that vanish against
/// every generator.
struct ConstrainedProblem {
  GridPtr grid;
  std::vector<DiscreteMeasure> marginals;
  CostTensor cost;
  ConstraintSet constraints;

  void validate() const;
};

/// Dual certificate: one potential vector per factor space plus one signed
/// multiplier per generator. Feasibility means
///   sum_k potentials[k][x_k] + sum_j multipliers[j] * gen_j(x) <= cost(x) + 1e-7
/// at every grid cell; the certified lower bound is
///   sum_k sum_i potentials[k][i] * mu_k(i).
struct DualCertificate {
  std::vector<std::vector<double>> potentials;
  std::vector<double> multipliers;

  double value(std::span<const DiscreteMeasure> marginals) const;
};

/// Row multipliers of an infeasible instance, split by row block. Any
/// admissible coupling would give these blocks a positive combined mass
/// balance, which is impossible; they witness emptiness.
struct InfeasibilityCertificate {
  std::vector<std::vector<double>> marginal_rows;  // per factor, per point
  std::vector<double> generator_rows;              // per generator
};

struct SolveReport {
  lp::Status status = lp::Status::optimal;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  std::optional<Coupling> coupling;
  std::optional<DualCertificate> certificate;
  std::optional<InfeasibilityCertificate> infeasibility;
};

struct FeasibilityReport {
  bool feasible = false;
  std::optional<Coupling> witness;
  std::optional<InfeasibilityCertificate> certificate;
};

/// Existence check: the constrained problem has a minimizer exactly when the
/// admissible set is nonempty, decided by LP phase 1.
FeasibilityReport check_feasible(const ConstrainedProblem& p);

/// Solves the constrained primal and extracts the dual certificate from the
/// final simplex basis. Infeasibility is a first-class answer: the report
/// carries a certificate instead of throwing. When `normalize_potentials` is
/// set, potentials are shifted so f_k(first point) = 0 for k >= 2, which
/// changes neither the pointwise sum nor the dual value.
SolveReport solve_primal(const ConstrainedProblem& p, bool normalize_potentials = false);

/// The certificate of an optimal solve; throws when the problem is not optimal.
DualCertificate solve_dual(const ConstrainedProblem& p, bool normalize_potentials = false);

/// |primal - dual| of an optimal report, asserted <= 1e-7 * (1 + |primal|).
double duality_gap(const SolveReport& report);

/// Verifies certificate feasibility against the problem and returns the
/// worst inequality slack violation (positive means violated).
double dual_feasibility_violation(const ConstrainedProblem& p, const DualCertificate& cert);

/// Standard-form LP for the constrained problem: one column per grid cell,
/// one row per marginal point per factor, then one row per generator.
lp::Program assemble_lp(const ConstrainedProblem& p);

}  // namespace lcot
