#include "lcot/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lcot {

namespace {

void require_coordinates(const ProductGrid& g, const char* who) {
  for (std::size_t k = 0; k < g.factor_count(); ++k)
    if (!g.factor(k)->has_coordinates())
      throw validation_error(std::string(who) + ": factor '" + g.factor(k)->id() +
                             "' has no coordinates");
}

}  // namespace

void MartingaleProblem::validate() const {
  if (!grid) throw validation_error("martingale problem: null grid");
  if (grid->factor_count() < 2)
    throw validation_error("martingale problem: need at least two marginals");
  require_coordinates(*grid, "martingale problem");
  if (marginals.size() != grid->factor_count())
    throw validation_error("martingale problem: need one marginal per factor");
  for (std::size_t k = 0; k < marginals.size(); ++k)
    if (marginals[k].size() != grid->factor_size(k))
      throw validation_error("martingale problem: marginal size mismatch on factor " +
                             std::to_string(k));
  if (!payoff.grid()->compatible_with(*grid))
    throw validation_error("martingale problem: payoff grid mismatch");
}

ConstraintSet martingale_generators(GridPtr grid) {
  const ProductGrid& g = *grid;
  require_coordinates(g, "martingale generators");
  ConstraintSet ws(grid);
  const std::size_t cells = g.cell_count();

  std::size_t prefix_size = 1;
  std::size_t suffix_size = cells;
  for (std::size_t k = 0; k + 1 < g.factor_count(); ++k) {
    prefix_size *= g.factor_size(k);
    suffix_size /= g.factor_size(k);
    // cells extending a prefix are contiguous in row-major flat order
    for (std::size_t pf = 0; pf < prefix_size; ++pf) {
      std::vector<double> values(cells, 0.0);
      for (std::size_t s = 0; s < suffix_size; ++s) {
        const std::size_t flat = pf * suffix_size + s;
        values[flat] = g.factor(k + 1)->coordinate(g.coordinate_of(flat, k + 1)) -
                       g.factor(k)->coordinate(g.coordinate_of(flat, k));
      }
      std::string name = "martingale[k=" + std::to_string(k + 1) + "][";
      std::size_t rem = pf;
      for (std::size_t j = 0; j <= k; ++j) {
        std::size_t block = 1;
        for (std::size_t l = j + 1; l <= k; ++l) block *= g.factor_size(l);
        const std::size_t idx = rem / block;
        rem %= block;
        name += (j ? "," : "") + g.factor(j)->label(idx);
      }
      name += "]";
      ws.add(ConstraintGenerator{std::move(name), std::move(values)});
    }
  }
  return ws;
}

ConvexOrderResult convex_order_check(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2) {
  if (!mu1.space()->has_coordinates() || !mu2.space()->has_coordinates())
    throw validation_error("convex order: both spaces need coordinates");
  ConvexOrderResult res;
  res.mean_first = mu1.mean();
  res.mean_second = mu2.mean();
  if (std::abs(res.mean_first - res.mean_second) > 1e-9) {
    res.ordered = false;
    return res;
  }
  std::set<double> strikes(mu1.space()->coordinates().begin(),
                           mu1.space()->coordinates().end());
  strikes.insert(mu2.space()->coordinates().begin(), mu2.space()->coordinates().end());
  auto call = [](const DiscreteMeasure& mu, double t) {
    double c = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      c += mu.weight(i) * std::max(mu.space()->coordinate(i) - t, 0.0);
    return c;
  };
  for (double t : strikes) {
    const double c1 = call(mu1, t);
    const double c2 = call(mu2, t);
    if (c1 > c2 + 1e-9) {
      res.ordered = false;
      res.witness_strike = t;
      res.call_first = c1;
      res.call_second = c2;
      return res;
    }
  }
  res.ordered = true;
  return res;
}

PriceBounds price_bounds(const MartingaleProblem& p, bool normalize_potentials) {
  p.validate();
  const ConstraintSet gens = martingale_generators(p.grid);
  const ConstrainedProblem low{p.grid, p.marginals, p.payoff, gens};

  PriceBounds out;
  out.lower_report = solve_primal(low, normalize_potentials);
  if (out.lower_report.status != lp::Status::optimal) {
    out.feasible = false;
    out.upper_report = out.lower_report;
    return out;
  }
  out.feasible = true;
  out.lower = out.lower_report.primal_value;

  std::vector<double> neg = p.payoff.values();
  for (double& v : neg) v = -v;
  const ConstrainedProblem high{p.grid, p.marginals, CostTensor(p.grid, std::move(neg)), gens};
  SolveReport hi = solve_primal(high, normalize_potentials);
  if (hi.status != lp::Status::optimal)
    throw numeric_error("price_bounds: upper solve failed although lower solve succeeded");
  // present the maximization against the original payoff: values flip sign and
  // the certificate becomes a superhedge, sum f + sum rho (dx) >= payoff
  hi.primal_value = -hi.primal_value;
  hi.dual_value = -hi.dual_value;
  if (hi.certificate) {
    for (auto& f : hi.certificate->potentials)
      for (double& v : f) v = -v;
    for (double& v : hi.certificate->multipliers) v = -v;
  }
  out.upper = hi.primal_value;
  out.upper_report = std::move(hi);
  if (out.lower > out.upper + 1e-9)
    throw numeric_error("price_bounds: lower bound exceeds upper bound");
  return out;
}

double conditional_mean_residual(const Coupling& pi) {
  const ProductGrid& g = *pi.grid();
  require_coordinates(g, "conditional mean residual");
  double worst = 0.0;
  std::size_t prefix_size = 1;
  std::size_t suffix_size = g.cell_count();
  for (std::size_t k = 0; k + 1 < g.factor_count(); ++k) {
    prefix_size *= g.factor_size(k);
    suffix_size /= g.factor_size(k);
    for (std::size_t pf = 0; pf < prefix_size; ++pf) {
      double mass = 0.0;
      double num = 0.0;
      for (std::size_t s = 0; s < suffix_size; ++s) {
        const std::size_t flat = pf * suffix_size + s;
        const double w = pi.weight(flat);
        mass += w;
        num += w * (g.factor(k + 1)->coordinate(g.coordinate_of(flat, k + 1)) -
                    g.factor(k)->coordinate(g.coordinate_of(flat, k)));
      }
      if (mass > 1e-12) worst = std::max(worst, std::abs(num) / mass);
    }
  }
  return worst;
}

}  // namespace lcot
