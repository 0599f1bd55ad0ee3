#include "lcot/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lcot {

namespace {

using Element = std::vector<std::vector<std::size_t>>;

bool is_permutation(const std::vector<std::size_t>& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<char> hit(n, 0);
  for (std::size_t v : p) {
    if (v >= n || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

bool is_identity(const Element& e) {
  for (const auto& p : e)
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != i) return false;
  return true;
}

// (e after f)(x) = e(f(x)), per factor
Element compose(const Element& e, const Element& f) {
  Element out(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    out[k].resize(e[k].size());
    for (std::size_t i = 0; i < e[k].size(); ++i) out[k][i] = e[k][f[k][i]];
  }
  return out;
}

Element invert(const Element& e) {
  Element out(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    out[k].resize(e[k].size());
    for (std::size_t i = 0; i < e[k].size(); ++i) out[k][e[k][i]] = i;
  }
  return out;
}

void check_shapes(const GroupAction& g, const ProductGrid& grid) {
  if (g.elements.empty()) throw validation_error("group: no elements");
  if (g.identity_index >= g.elements.size())
    throw validation_error("group: identity index out of range");
  for (const auto& e : g.elements) {
    if (e.size() != grid.factor_count())
      throw validation_error("group: element arity does not match grid factors");
    for (std::size_t k = 0; k < e.size(); ++k)
      if (!is_permutation(e[k], grid.factor_size(k)))
        throw validation_error("group: element map on factor " + std::to_string(k) +
                               " is not a bijection");
  }
}

}  // namespace

std::size_t GroupAction::apply(const ProductGrid& grid, std::size_t element,
                               std::size_t flat) const {
  const Element& e = elements[element];
  std::vector<std::size_t> multi(grid.factor_count());
  grid.multi_index(flat, multi);
  for (std::size_t k = 0; k < multi.size(); ++k) multi[k] = e[k][multi[k]];
  return grid.flat_index(multi);
}

GroupAction GroupAction::inverse_table(const ProductGrid& grid) const {
  GroupAction out;
  out.identity_index = identity_index;
  out.elements.reserve(elements.size());
  for (const auto& e : elements) out.elements.push_back(invert(e));
  (void)grid;
  return out;
}

GroupValidation validate_group(const GroupAction& g, const ProductGrid& grid) {
  check_shapes(g, grid);
  GroupValidation out;
  if (!is_identity(g.elements[g.identity_index])) {
    out.valid = false;
    out.violation = "element at identity_index is not the identity map";
    return out;
  }
  std::map<Element, std::size_t> lookup;
  for (std::size_t e = 0; e < g.elements.size(); ++e) {
    if (!lookup.emplace(g.elements[e], e).second) {
      out.valid = false;
      out.violation = "duplicate element at index " + std::to_string(e);
      return out;
    }
  }
  out.composition_table.assign(g.order(), std::vector<std::size_t>(g.order(), 0));
  for (std::size_t e = 0; e < g.order(); ++e) {
    for (std::size_t f = 0; f < g.order(); ++f) {
      const auto it = lookup.find(compose(g.elements[e], g.elements[f]));
      if (it == lookup.end()) {
        out.valid = false;
        out.violation = "closure violated: composition of elements " + std::to_string(e) +
                        " and " + std::to_string(f) + " is not in the list";
        return out;
      }
      out.composition_table[e][f] = it->second;
    }
  }
  for (std::size_t e = 0; e < g.order(); ++e) {
    bool has_inverse = false;
    for (std::size_t f = 0; f < g.order(); ++f)
      if (out.composition_table[e][f] == g.identity_index) {
        has_inverse = true;
        break;
      }
    if (!has_inverse) {
      out.valid = false;
      out.violation = "element " + std::to_string(e) + " has no inverse";
      return out;
    }
  }
  return out;
}

ConstraintSet invariance_generators(const GroupAction& g, GridPtr grid) {
  const GroupValidation v = validate_group(g, *grid);
  if (!v.valid) throw validation_error("invariance generators: " + v.violation);
  ConstraintSet ws(grid);
  const std::size_t cells = grid->cell_count();
  const GroupAction ginv = g.inverse_table(*grid);
  for (std::size_t e = 0; e < g.order(); ++e) {
    if (e == g.identity_index) continue;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      std::vector<double> values(cells, 0.0);
      // indicator of `cell` composed with the element, minus the indicator:
      // +1 at g^{-1}(cell), -1 at cell
      values[ginv.apply(*grid, e, cell)] += 1.0;
      values[cell] -= 1.0;
      ws.add(ConstraintGenerator{
          "invariant[g=" + std::to_string(e) + "][cell=" + std::to_string(cell) + "]",
          std::move(values)});
    }
  }
  return ws;
}

CostTensor symmetrize_function(const CostTensor& c, const GroupAction& g) {
  const ProductGrid& grid = *c.grid();
  check_shapes(g, grid);
  std::vector<double> out(grid.cell_count(), 0.0);
  const double inv_order = 1.0 / static_cast<double>(g.order());
  for (std::size_t e = 0; e < g.order(); ++e)
    for (std::size_t x = 0; x < grid.cell_count(); ++x)
      out[x] += c.value(g.apply(grid, e, x)) * inv_order;
  return CostTensor(c.grid(), std::move(out));
}

CostTensor projection_w1(const CostTensor& h, const GroupAction& g) {
  const CostTensor avg = symmetrize_function(h, g);
  std::vector<double> out(h.values());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] -= avg.value(x);
  return CostTensor(h.grid(), std::move(out));
}

Coupling symmetrize_measure(const Coupling& pi, const GroupAction& g) {
  const ProductGrid& grid = *pi.grid();
  check_shapes(g, grid);
  std::vector<double> out(grid.cell_count(), 0.0);
  const double inv_order = 1.0 / static_cast<double>(g.order());
  // the pushforward by e sends mass at x to e(x); averaging over e
  for (std::size_t e = 0; e < g.order(); ++e)
    for (std::size_t x = 0; x < grid.cell_count(); ++x)
      out[g.apply(grid, e, x)] += pi.weight(x) * inv_order;
  return Coupling(pi.grid(), std::move(out));
}

double measure_invariance_residual(const DiscreteMeasure& mu,
                                   const std::vector<std::size_t>& perm) {
  if (!is_permutation(perm, mu.size()))
    throw validation_error("invariance residual: map is not a bijection");
  double worst = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    worst = std::max(worst, std::abs(mu.weight(perm[i]) - mu.weight(i)));
  return worst;
}

double coupling_invariance_residual(const Coupling& pi, const GroupAction& g) {
  const ProductGrid& grid = *pi.grid();
  check_shapes(g, grid);
  double worst = 0.0;
  for (std::size_t e = 0; e < g.order(); ++e)
    for (std::size_t x = 0; x < grid.cell_count(); ++x)
      worst = std::max(worst, std::abs(pi.weight(g.apply(grid, e, x)) - pi.weight(x)));
  return worst;
}

InvariantReductionReport invariant_reduction_check(const ConstrainedProblem& p,
                                                   const GroupAction& g) {
  p.validate();
  const GroupValidation v = validate_group(g, *p.grid);
  if (!v.valid) throw validation_error("invariant reduction: " + v.violation);
  for (std::size_t e = 0; e < g.order(); ++e)
    for (std::size_t k = 0; k < p.marginals.size(); ++k)
      if (measure_invariance_residual(p.marginals[k], g.elements[e][k]) > 1e-9)
        throw validation_error("invariant reduction: marginal on factor " +
                               std::to_string(k) + " is not invariant under element " +
                               std::to_string(e));

  InvariantReductionReport out;
  out.constrained = solve_primal(p);
  const ConstrainedProblem reduced{p.grid, p.marginals, symmetrize_function(p.cost, g),
                                   ConstraintSet(p.grid)};
  out.reduced = solve_primal(reduced);
  if (out.constrained.status != lp::Status::optimal ||
      out.reduced.status != lp::Status::optimal)
    throw numeric_error("invariant reduction: a solve did not reach optimality");
  out.constrained_value = out.constrained.primal_value;
  out.reduced_value = out.reduced.primal_value;
  if (std::abs(out.constrained_value - out.reduced_value) >
      1e-7 * (1.0 + std::abs(out.constrained_value)))
    throw numeric_error("invariant reduction: constrained and symmetrized values disagree");
  return out;
}

GroupAction expand_generating_set(std::vector<Element> generators, const ProductGrid& grid) {
  Element id(grid.factor_count());
  for (std::size_t k = 0; k < grid.factor_count(); ++k) {
    id[k].resize(grid.factor_size(k));
    for (std::size_t i = 0; i < id[k].size(); ++i) id[k][i] = i;
  }
  for (const auto& e : generators) {
    if (e.size() != grid.factor_count())
      throw validation_error("group closure: generator arity mismatch");
    for (std::size_t k = 0; k < e.size(); ++k)
      if (!is_permutation(e[k], grid.factor_size(k)))
        throw validation_error("group closure: generator is not a bijection");
  }

  constexpr std::size_t kMaxOrder = 10000;
  std::map<Element, std::size_t> index;
  std::vector<Element> elements;
  auto insert = [&](Element e) -> bool {
    if (index.contains(e)) return false;
    index.emplace(e, elements.size());
    elements.push_back(std::move(e));
    if (elements.size() > kMaxOrder)
      throw validation_error("group closure: exceeded 10000 elements");
    return true;
  };
  insert(id);
  for (auto& e : generators) insert(std::move(e));
  // fixed point of composition over all ordered pairs
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t sz = elements.size();
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t j = 0; j < sz; ++j)
        if (insert(compose(elements[i], elements[j]))) grew = true;
  }

  GroupAction g;
  g.elements = std::move(elements);
  g.identity_index = 0;
  return g;
}

}  // namespace lcot
