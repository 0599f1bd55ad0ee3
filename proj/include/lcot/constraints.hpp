#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcot/measures.hpp"

namespace lcot {

/// A function on the product grid, stored pre-evaluated; the induced
/// constraint on a coupling pi is sum_x values(x) * pi(x) = 0.
struct ConstraintGenerator {
  std::string name;
  std::vector<double> values;  // flat over the grid
};

/// Finite family of generators spanning the constraint subspace at grid scale.
class ConstraintSet {
 public:
  explicit ConstraintSet(GridPtr grid);
  ConstraintSet(GridPtr grid, std::vector<ConstraintGenerator> generators);

  const GridPtr& grid() const { return grid_; }
  const std::vector<ConstraintGenerator>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }
  bool empty() const { return generators_.empty(); }

  void add(ConstraintGenerator gen);

 private:
  GridPtr grid_;
  std::vector<ConstraintGenerator> generators_;
};

/// Dense row block for the LP: one row per generator, one column per grid
/// cell, entry (j, x) = generator_j(x). The right-hand side of these rows is 0.
std::vector<double> assemble_rows(const ConstraintSet& ws);

/// Keeps a subset of the generators whose rows span the same space within tol
/// (column-pivoted elimination). The feasible set of couplings is unchanged.
ConstraintSet reduce_generators(const ConstraintSet& ws, double tol = 1e-10);

struct MarginalCompatibilityEntry {
  std::string generator;
  bool applicable = false;     // generator depends on a single coordinate
  std::size_t factor = 0;      // which coordinate, when applicable
  double integral = 0.0;       // sum_x f(x) mu_k(x), when applicable
  bool violated = false;       // |integral| > 1e-9
};

struct MarginalCompatibilityReport {
  std::vector<MarginalCompatibilityEntry> entries;
  bool all_compatible = true;
};

/// Necessary condition on the marginals: a generator that depends on one
/// coordinate only must integrate to zero against that marginal, otherwise no
/// admissible coupling exists. Generators depending on several coordinates are
/// reported as not applicable. Diagnostic only, never throws on violation.
MarginalCompatibilityReport check_marginal_compatibility(
    const ConstraintSet& ws, std::span<const DiscreteMeasure> measures);

}  // namespace lcot
