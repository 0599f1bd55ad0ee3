#include "lcot/solver.hpp"

#include <cmath>
#include <limits>

namespace lcot {

namespace {

InfeasibilityCertificate split_certificate(const ConstrainedProblem& p,
                                           const std::vector<double>& y) {
  InfeasibilityCertificate cert;
  std::size_t row = 0;
  for (const auto& mu : p.marginals) {
    cert.marginal_rows.emplace_back(y.begin() + row, y.begin() + row + mu.size());
    row += mu.size();
  }
  cert.generator_rows.assign(y.begin() + row, y.end());
  return cert;
}

DualCertificate split_duals(const ConstrainedProblem& p, const std::vector<double>& y) {
  DualCertificate cert;
  std::size_t row = 0;
  for (const auto& mu : p.marginals) {
    cert.potentials.emplace_back(y.begin() + row, y.begin() + row + mu.size());
    row += mu.size();
  }
  cert.multipliers.assign(y.begin() + row, y.end());
  return cert;
}

// Shifts potentials so f_k(first point) = 0 for k >= 2; the shifted total is
// added to f_1, leaving the pointwise separable sum and the dual value intact.
void normalize(DualCertificate& cert) {
  if (cert.potentials.size() < 2) return;
  double total = 0.0;
  for (std::size_t k = 1; k < cert.potentials.size(); ++k) {
    const double shift = cert.potentials[k][0];
    for (double& v : cert.potentials[k]) v -= shift;
    total += shift;
  }
  for (double& v : cert.potentials[0]) v += total;
}

}  // namespace

void ConstrainedProblem::validate() const {
  if (!grid) throw validation_error("problem: null grid");
  if (marginals.size() != grid->factor_count())
    throw validation_error("problem: need one marginal per grid factor");
  for (std::size_t k = 0; k < marginals.size(); ++k)
    if (marginals[k].size() != grid->factor_size(k))
      throw validation_error("problem: marginal size mismatch on factor " + std::to_string(k));
  if (!cost.grid()->compatible_with(*grid))
    throw validation_error("problem: cost tensor grid mismatch");
  if (!constraints.grid()->compatible_with(*grid))
    throw validation_error("problem: constraint grid mismatch");
}

double DualCertificate::value(std::span<const DiscreteMeasure> marginals) const {
  double v = 0.0;
  for (std::size_t k = 0; k < potentials.size(); ++k)
    for (std::size_t i = 0; i < potentials[k].size(); ++i)
      v += potentials[k][i] * marginals[k].weight(i);
  return v;
}

lp::Program assemble_lp(const ConstrainedProblem& p) {
  p.validate();
  const ProductGrid& g = *p.grid;
  const std::size_t cells = g.cell_count();
  std::size_t marginal_rows = 0;
  for (const auto& mu : p.marginals) marginal_rows += mu.size();

  lp::Program prog;
  prog.cols = cells;
  prog.rows = marginal_rows + p.constraints.size();
  prog.objective = p.cost.values();
  prog.matrix.assign(prog.rows * prog.cols, 0.0);
  prog.rhs.assign(prog.rows, 0.0);

  std::size_t row0 = 0;
  for (std::size_t k = 0; k < p.marginals.size(); ++k) {
    for (std::size_t flat = 0; flat < cells; ++flat)
      prog.at(row0 + g.coordinate_of(flat, k), flat) = 1.0;
    for (std::size_t i = 0; i < p.marginals[k].size(); ++i)
      prog.rhs[row0 + i] = p.marginals[k].weight(i);
    row0 += p.marginals[k].size();
  }
  for (std::size_t j = 0; j < p.constraints.size(); ++j) {
    const auto& gen = p.constraints.generators()[j];
    for (std::size_t flat = 0; flat < cells; ++flat)
      prog.at(row0 + j, flat) = gen.values[flat];
  }
  return prog;
}

FeasibilityReport check_feasible(const ConstrainedProblem& p) {
  const lp::Program prog = assemble_lp(p);
  const lp::Feasibility f = lp::phase1_feasibility(prog);
  FeasibilityReport out;
  out.feasible = f.feasible;
  if (f.feasible)
    out.witness = Coupling(p.grid, f.witness);
  else
    out.certificate = split_certificate(p, f.certificate);
  return out;
}

SolveReport solve_primal(const ConstrainedProblem& p, bool normalize_potentials) {
  const lp::Program prog = assemble_lp(p);
  const lp::Solution sol = lp::solve(prog);
  SolveReport report;
  report.status = sol.status;
  if (sol.status == lp::Status::infeasible) {
    report.infeasibility = split_certificate(p, sol.certificate);
    return report;
  }
  if (sol.status == lp::Status::unbounded) return report;

  report.coupling = Coupling(p.grid, sol.primal);
  report.primal_value = sol.objective_value;
  DualCertificate cert = split_duals(p, sol.dual);
  if (normalize_potentials) normalize(cert);
  report.dual_value = cert.value(p.marginals);
  report.gap = std::abs(report.primal_value - report.dual_value);
  const double viol = dual_feasibility_violation(p, cert);
  if (viol > 1e-7)
    throw numeric_error("solver: extracted certificate violates dual feasibility");
  if (report.gap > 1e-7 * (1.0 + std::abs(report.primal_value)))
    throw numeric_error("solver: duality gap exceeds tolerance");
  report.certificate = std::move(cert);
  return report;
}

DualCertificate solve_dual(const ConstrainedProblem& p, bool normalize_potentials) {
  SolveReport report = solve_primal(p, normalize_potentials);
  if (report.status != lp::Status::optimal)
    throw numeric_error(std::string("solve_dual: primal not optimal (") +
                        lp::to_string(report.status) + ")");
  return std::move(*report.certificate);
}

double duality_gap(const SolveReport& report) {
  if (report.status != lp::Status::optimal)
    throw validation_error("duality_gap: report is not optimal");
  return std::abs(report.primal_value - report.dual_value);
}

double dual_feasibility_violation(const ConstrainedProblem& p, const DualCertificate& cert) {
  const ProductGrid& g = *p.grid;
  double worst = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> multi(g.factor_count());
  for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
    g.multi_index(flat, multi);
    double lhs = 0.0;
    for (std::size_t k = 0; k < multi.size(); ++k) lhs += cert.potentials[k][multi[k]];
    for (std::size_t j = 0; j < cert.multipliers.size(); ++j)
      lhs += cert.multipliers[j] * p.constraints.generators()[j].values[flat];
    worst = std::max(worst, lhs - p.cost.value(flat));
  }
  return worst;
}

}  // namespace lcot
