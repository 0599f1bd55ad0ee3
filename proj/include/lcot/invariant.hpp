#pragma once

#include <string>
#include <vector>

#include "lcot/solver.hpp"

namespace lcot {

/// A finite group acting diagonally on the product grid: each element is one
/// permutation per factor space, applied coordinatewise. Stored as an explicit
/// element list and validated against the group axioms; use
/// expand_generating_set to build the list from generators.
struct GroupAction {
  /// elements[e][k][i] = image of point i of factor k under element e.
  std::vector<std::vector<std::vector<std::size_t>>> elements;
  std::size_t identity_index = 0;

  std::size_t order() const { return elements.size(); }
  /// Image of a flat cell index under element e.
  std::size_t apply(const ProductGrid& grid, std::size_t element, std::size_t flat) const;
  GroupAction inverse_table(const ProductGrid& grid) const;
};

struct GroupValidation {
  bool valid = true;
  std::string violation;  // first violated axiom, with witnesses
  std::vector<std::vector<std::size_t>> composition_table;  // [e][f] = index of e after f
};

/// Checks identity, closure under composition, and inverses; returns the
/// composition table when valid and the first violated axiom otherwise.
GroupValidation validate_group(const GroupAction& g, const ProductGrid& grid);

/// Raw invariance family: for every non-identity element and every grid cell,
/// the difference of the cell indicator composed with the element and the
/// indicator itself. A coupling vanishes against all of them iff it is fixed
/// by every element's pushforward. Pass the result through reduce_generators
/// to drop the (many) dependent rows.
ConstraintSet invariance_generators(const GroupAction& g, GridPtr grid);

/// Group average (uniform over elements): the result is invariant and the
/// averaging is idempotent.
CostTensor symmetrize_function(const CostTensor& c, const GroupAction& g);

/// Complementary projection: h minus its group average. Idempotent,
/// annihilates invariant tensors, and fixes every difference h(g(.)) - h.
CostTensor projection_w1(const CostTensor& h, const GroupAction& g);

/// Average of the pushforwards of pi over all elements. Invariant; preserves
/// the marginals when they are invariant and the cost integral when the cost is.
Coupling symmetrize_measure(const Coupling& pi, const GroupAction& g);

/// Max over elements and points of |mu(g^{-1} point) - mu(point)|.
double measure_invariance_residual(const DiscreteMeasure& mu,
                                   const std::vector<std::size_t>& perm);
/// Max over elements and cells of |pi(g^{-1} cell) - pi(cell)|.
double coupling_invariance_residual(const Coupling& pi, const GroupAction& g);

struct InvariantReductionReport {
  double constrained_value = 0.0;  // invariance-constrained, original cost
  double reduced_value = 0.0;      // unconstrained, symmetrized cost
  SolveReport constrained;
  SolveReport reduced;
};

/// With invariant marginals, the invariance-constrained optimal value with
/// cost c equals the unconstrained optimal value with the symmetrized cost.
/// Solves both and asserts the identity within 1e-7 * (1 + |value|);
/// non-invariant marginals are rejected.
InvariantReductionReport invariant_reduction_check(const ConstrainedProblem& p,
                                                   const GroupAction& g);

/// Closure of a generating set (identity added automatically); throws when the
/// group would exceed 10^4 elements.
GroupAction expand_generating_set(std::vector<std::vector<std::vector<std::size_t>>> generators,
                                  const ProductGrid& grid);

}  // namespace lcot
