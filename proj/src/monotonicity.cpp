#include "lcot/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace lcot {

namespace {

std::vector<std::vector<double>> beta_marginals(const SupportSet& beta,
                                                const ProductGrid& grid,
                                                const std::vector<double>& w) {
  std::vector<std::vector<double>> out(grid.factor_count());
  for (std::size_t k = 0; k < grid.factor_count(); ++k)
    out[k].assign(grid.factor_size(k), 0.0);
  for (std::size_t s = 0; s < beta.points.size(); ++s)
    for (std::size_t k = 0; k < grid.factor_count(); ++k)
      out[k][beta.points[s][k]] += w[s];
  return out;
}

double beta_integral(const SupportSet& beta, const ProductGrid& grid,
                     const std::vector<double>& w, const std::vector<double>& tensor) {
  double acc = 0.0;
  for (std::size_t s = 0; s < beta.points.size(); ++s)
    acc += w[s] * tensor[grid.flat_index(beta.points[s])];
  return acc;
}

// One LP bounding the violation over every weighting carried by the subset:
//   max  cost(beta) - cost(alpha)
//   s.t. beta a probability vector on the subset, alpha >= 0 on the grid,
//        matching factor marginals and generator integrals.
// The inner minimum over the class is convex in the weighting, so this
// supremum dominates the violation of every individual weighting.
double subset_violation_bound(const std::vector<std::vector<std::size_t>>& subset,
                              GridPtr grid, const CostTensor& cost,
                              const ConstraintSet& ws) {
  const ProductGrid& g = *grid;
  const std::size_t s_count = subset.size();
  const std::size_t cells = g.cell_count();
  std::size_t marginal_rows = 0;
  for (std::size_t k = 0; k < g.factor_count(); ++k) marginal_rows += g.factor_size(k);

  lp::Program prog;
  prog.cols = s_count + cells;
  prog.rows = 1 + marginal_rows + ws.size();
  prog.matrix.assign(prog.rows * prog.cols, 0.0);
  prog.rhs.assign(prog.rows, 0.0);
  prog.objective.assign(prog.cols, 0.0);

  for (std::size_t s = 0; s < s_count; ++s)
    prog.objective[s] = -cost.value(g.flat_index(subset[s]));
  for (std::size_t x = 0; x < cells; ++x) prog.objective[s_count + x] = cost.value(x);

  // total mass of beta
  for (std::size_t s = 0; s < s_count; ++s) prog.at(0, s) = 1.0;
  prog.rhs[0] = 1.0;

  std::size_t row = 1;
  std::vector<std::size_t> factor_row0(g.factor_count());
  for (std::size_t k = 0; k < g.factor_count(); ++k) {
    factor_row0[k] = row;
    row += g.factor_size(k);
  }
  for (std::size_t s = 0; s < s_count; ++s)
    for (std::size_t k = 0; k < g.factor_count(); ++k)
      prog.at(factor_row0[k] + subset[s][k], s) = 1.0;
  for (std::size_t x = 0; x < cells; ++x)
    for (std::size_t k = 0; k < g.factor_count(); ++k)
      prog.at(factor_row0[k] + g.coordinate_of(x, k), s_count + x) = -1.0;

  for (std::size_t j = 0; j < ws.size(); ++j) {
    const auto& vals = ws.generators()[j].values;
    for (std::size_t s = 0; s < s_count; ++s)
      prog.at(row + j, s) = vals[g.flat_index(subset[s])];
    for (std::size_t x = 0; x < cells; ++x) prog.at(row + j, s_count + x) = -vals[x];
  }

  const lp::Solution sol = lp::solve(prog);
  if (sol.status != lp::Status::optimal)
    throw numeric_error("monotonicity screen: unexpected LP status");
  return -sol.objective_value;
}

}  // namespace

void SupportSet::validate(const ProductGrid& grid) const {
  if (points.empty()) throw validation_error("support set: empty");
  std::set<std::size_t> seen;
  for (const auto& pt : points) {
    if (!seen.insert(grid.flat_index(pt)).second)
      throw validation_error("support set: duplicate point");
  }
  if (!weights.empty()) {
    if (weights.size() != points.size())
      throw validation_error("support set: weight count mismatch");
    double sum = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) throw validation_error("support set: weights must be positive");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw validation_error("support set: weights must sum to 1");
  }
}

std::vector<double> SupportSet::effective_weights() const {
  if (!weights.empty()) return weights;
  return std::vector<double>(points.size(), 1.0 / static_cast<double>(points.size()));
}

std::pair<double, Coupling> equivalence_minimize(const SupportSet& beta,
                                                 GridPtr candidate_grid,
                                                 const CostTensor& cost,
                                                 const ConstraintSet& ws) {
  const ProductGrid& g = *candidate_grid;
  beta.validate(g);
  if (!cost.grid()->compatible_with(g) || !ws.grid()->compatible_with(g))
    throw validation_error("equivalence_minimize: grid mismatch");
  const std::vector<double> w = beta.effective_weights();
  const auto marg = beta_marginals(beta, g, w);
  const std::size_t cells = g.cell_count();

  lp::Program prog;
  prog.cols = cells;
  std::size_t marginal_rows = 0;
  for (std::size_t k = 0; k < g.factor_count(); ++k) marginal_rows += g.factor_size(k);
  prog.rows = marginal_rows + ws.size();
  prog.objective = cost.values();
  prog.matrix.assign(prog.rows * prog.cols, 0.0);
  prog.rhs.assign(prog.rows, 0.0);

  std::size_t row0 = 0;
  for (std::size_t k = 0; k < g.factor_count(); ++k) {
    for (std::size_t x = 0; x < cells; ++x)
      prog.at(row0 + g.coordinate_of(x, k), x) = 1.0;
    for (std::size_t i = 0; i < g.factor_size(k); ++i) prog.rhs[row0 + i] = marg[k][i];
    row0 += g.factor_size(k);
  }
  for (std::size_t j = 0; j < ws.size(); ++j) {
    const auto& vals = ws.generators()[j].values;
    for (std::size_t x = 0; x < cells; ++x) prog.at(row0 + j, x) = vals[x];
    prog.rhs[row0 + j] = beta_integral(beta, g, w, vals);
  }

  const lp::Solution sol = lp::solve(prog);
  if (sol.status != lp::Status::optimal)
    throw numeric_error("equivalence_minimize: LP not optimal although beta is admissible");
  return {sol.objective_value, Coupling(candidate_grid, sol.primal)};
}

MonotonicityVerdict check_cw_monotone(const std::vector<std::vector<std::size_t>>& support,
                                      const CostTensor& cost, const ConstraintSet& ws,
                                      int m_max, int trials, GridPtr candidate_grid,
                                      double tol, std::uint64_t seed) {
  if (m_max < 1) throw validation_error("check_cw_monotone: m_max must be >= 1");
  const ProductGrid& g = *candidate_grid;
  SupportSet all{support, {}};
  all.validate(g);

  const std::size_t n = support.size();
  const std::size_t size_cap = std::min<std::size_t>(static_cast<std::size_t>(m_max), n);

  // count subsets of size 1..size_cap, capped at the enumeration limit
  constexpr std::size_t kEnumerationCap = 10000;
  std::size_t total = 0;
  for (std::size_t m = 1; m <= size_cap && total <= kEnumerationCap; ++m) {
    std::size_t c = 1;
    for (std::size_t i = 0; i < m; ++i) {
      c = c * (n - i) / (i + 1);
      if (c > kEnumerationCap) break;
    }
    total = (c > kEnumerationCap) ? kEnumerationCap + 1 : total + c;
  }

  std::vector<std::vector<std::size_t>> subsets;  // index lists into `support`
  if (total <= kEnumerationCap) {
    for (std::size_t m = 1; m <= size_cap; ++m) {
      std::vector<std::size_t> idx(m);
      for (std::size_t i = 0; i < m; ++i) idx[i] = i;
      for (;;) {
        subsets.push_back(idx);
        std::size_t i = m;
        while (i-- > 0) {
          if (idx[i] < n - m + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
            break;
          }
          if (i == 0) goto next_size;
        }
      }
    next_size:;
    }
  } else {
    std::mt19937_64 rng(seed ^ 0x5b5e5915a4d1c0ffULL);
    std::uniform_int_distribution<std::size_t> size_dist(1, size_cap);
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (int t = 0; t < trials; ++t) {
      const std::size_t m = size_dist(rng);
      for (std::size_t i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
      }
      std::vector<std::size_t> idx(pool.begin(), pool.begin() + m);
      std::sort(idx.begin(), idx.end());
      subsets.push_back(std::move(idx));
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(1e-12, 1.0);
  MonotonicityVerdict verdict;
  for (const auto& idx : subsets) {
    std::vector<std::vector<std::size_t>> pts;
    pts.reserve(idx.size());
    for (std::size_t i : idx) pts.push_back(support[i]);

    const double bound = subset_violation_bound(pts, candidate_grid, cost, ws);
    if (bound <= tol) {
      verdict.worst_violation = std::max(verdict.worst_violation, std::max(0.0, bound));
      continue;
    }

    // the bound is violated somewhere; test the uniform weighting plus
    // `trials` random positive weightings, as contracted
    for (int t = 0; t <= trials; ++t) {
      SupportSet beta{pts, {}};
      if (t > 0) {
        std::vector<double> w(pts.size());
        double sum = 0.0;
        for (double& v : w) {
          v = -std::log(unit(rng));
          sum += v;
        }
        for (double& v : w) v /= sum;
        beta.weights = std::move(w);
      }
      const std::vector<double> w = beta.effective_weights();
      const double beta_cost = beta_integral(beta, g, w, cost.values());
      auto [min_cost, alpha] = equivalence_minimize(beta, candidate_grid, cost, ws);
      const double viol = beta_cost - min_cost;
      if (viol > verdict.worst_violation) {
        verdict.worst_violation = viol;
        if (viol > tol) {
          verdict.witness = std::move(alpha);
          verdict.witness_beta = std::move(beta);
        }
      }
      if (viol > tol) verdict.passed = false;
    }
  }
  if (verdict.worst_violation <= tol) verdict.passed = true;
  return verdict;
}

MonotonicityVerdict verify_solution_monotone(const SolveReport& report,
                                             const ConstrainedProblem& p, int m_max,
                                             int trials, double tol, std::uint64_t seed) {
  if (report.status != lp::Status::optimal || !report.coupling)
    throw validation_error("verify_solution_monotone: report is not optimal");
  const ProductGrid& g = *p.grid;
  std::vector<std::vector<std::size_t>> support;
  for (std::size_t flat = 0; flat < g.cell_count(); ++flat)
    if (report.coupling->weight(flat) > 1e-9) support.push_back(g.multi_index(flat));
  return check_cw_monotone(support, p.cost, p.constraints, m_max, trials, p.grid, tol, seed);
}

}  // namespace lcot
