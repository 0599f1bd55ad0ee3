// Acceptance suite: one line per criterion, nonzero exit when any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lcot/invariant.hpp"
#include "lcot/martingale.hpp"
#include "lcot/monotonicity.hpp"
#include "lcot/solver.hpp"
#include "oracle_lp.hpp"
#include "test_util.hpp"

using namespace lcot;
using namespace lcot::test;

namespace {

int failures = 0;

void report(int number, const char* name, bool ok, const std::string& detail = "") {
  std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name,
              detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++failures;
}

struct SolvedInstance {
  ConstrainedProblem problem;
  SolveReport report;
};

// shared by criteria 1 and 3
std::vector<SolvedInstance>& duality_suite() {
  static std::vector<SolvedInstance> suite = [] {
    std::vector<SolvedInstance> out;
    Rng rng(20240);
    for (int t = 0; t < 200; ++t) {
      ConstrainedProblem p = random_feasible_instance(rng, 6, 5);
      SolveReport r = solve_primal(p);
      out.push_back(SolvedInstance{std::move(p), std::move(r)});
    }
    return out;
  }();
  return suite;
}

// --- criterion 1: strong duality on random feasible constrained instances ---
void criterion1() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const auto& inst : duality_suite()) {
    if (inst.report.status != lp::Status::optimal) {
      ok = false;
      detail = "a constructed-feasible instance did not solve to optimality";
      break;
    }
    const double gap = std::abs(inst.report.primal_value - inst.report.dual_value);
    if (gap > 1e-7 * (1.0 + std::abs(inst.report.primal_value))) {
      ok = false;
      detail = "duality gap " + std::to_string(gap);
      break;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[128];
  std::snprintf(buf, sizeof(buf), "200 instances, gap <= 1e-7*(1+|value|), %.2fs", secs);
  report(1, "strong duality", ok, detail.empty() ? buf : detail);
}

// --- criterion 2: unconstrained 4x4 equals permutation enumeration ---
void criterion2() {
  Rng rng(20241);
  auto a = plain_space("A", 4);
  auto b = plain_space("B", 4);
  GridPtr g = make_grid({a, b});
  const DiscreteMeasure uniform4(a, {0.25, 0.25, 0.25, 0.25});
  const DiscreteMeasure uniform4b(b, {0.25, 0.25, 0.25, 0.25});
  std::uniform_int_distribution<int> entry(-5, 5);
  bool ok = true;
  std::string detail;
  for (int t = 0; t < 100 && ok; ++t) {
    std::vector<double> cost(16);
    for (double& v : cost) v = entry(rng);
    ConstrainedProblem p{g, {uniform4, uniform4b}, CostTensor(g, cost), ConstraintSet(g)};
    const SolveReport r = solve_primal(p);
    if (r.status != lp::Status::optimal) {
      ok = false;
      detail = "solve failed";
      break;
    }
    std::array<std::size_t, 4> perm{0, 1, 2, 3};
    double best = std::numeric_limits<double>::infinity();
    do {
      double v = 0.0;
      for (std::size_t i = 0; i < 4; ++i) v += 0.25 * cost[i * 4 + perm[i]];
      best = std::min(best, v);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (std::abs(r.primal_value - best) > 1e-9) {
      ok = false;
      detail = "LP " + std::to_string(r.primal_value) + " vs permutations " +
               std::to_string(best);
    }
  }
  report(2, "classical reduction vs 24-permutation enumeration", ok,
         ok ? "100 instances, exact to 1e-9" : detail);
}

// --- criterion 3: monotonicity of optimal supports ---
void criterion3() {
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < duality_suite().size() && ok; ++i) {
    const auto& inst = duality_suite()[i];
    const MonotonicityVerdict v =
        verify_solution_monotone(inst.report, inst.problem, 3, 50, 1e-7, 42);
    if (!v.passed) {
      ok = false;
      detail = "instance " + std::to_string(i) + " violated by " +
               std::to_string(v.worst_violation);
    }
  }

  // pairwise closed form with no constraints
  Rng rng(20243);
  auto a = plain_space("A", 4);
  auto b = plain_space("B", 4);
  GridPtr g = make_grid({a, b});
  std::uniform_int_distribution<int> entry(-4, 4);
  std::uniform_int_distribution<std::size_t> pt(0, 3);
  int checked = 0, fail_side = 0;
  while (checked < 500 && ok) {
    std::vector<double> cost(16);
    for (double& v : cost) v = entry(rng);
    const std::size_t x1 = pt(rng), y1 = pt(rng), x2 = pt(rng), y2 = pt(rng);
    if (x1 == x2 && y1 == y2) continue;
    ++checked;
    CostTensor c(g, cost);
    const MonotonicityVerdict v =
        check_cw_monotone({{x1, y1}, {x2, y2}}, c, ConstraintSet(g), 2, 50, g, 1e-7, 42);
    const bool closed_form_fails =
        cost[x1 * 4 + y1] + cost[x2 * 4 + y2] > cost[x1 * 4 + y2] + cost[x2 * 4 + y1] + 1e-7;
    if (v.passed != !closed_form_fails) {
      ok = false;
      detail = "pairwise verdict disagrees with the closed form";
    }
    if (closed_form_fails) ++fail_side;
  }
  if (ok && (fail_side < 50 || fail_side > 450)) {
    ok = false;
    detail = "pairwise sample did not exercise both outcomes";
  }
  report(3, "optimal supports are monotone; m=2 matches the closed form", ok,
         ok ? "200 couplings (m<=3) + 500 pairs" : detail);
}

// --- criterion 4: martingale instantiation ---
void criterion4() {
  bool ok = true;
  std::string detail;

  auto coord_measure = [](const std::string& id, std::vector<double> coords,
                          std::vector<double> w) {
    return DiscreteMeasure(make_coordinate_space(id, std::move(coords)), std::move(w));
  };
  auto abs_payoff = [](const GridPtr& g) {
    std::vector<double> cost(g->cell_count());
    for (std::size_t flat = 0; flat < cost.size(); ++flat)
      cost[flat] = std::abs(g->factor(0)->coordinate(g->coordinate_of(flat, 0)) -
                            g->factor(1)->coordinate(g->coordinate_of(flat, 1)));
    return cost;
  };

  {  // (a) the fully determined four-point instance
    auto mu1 = coord_measure("X", {-1.0, 1.0}, {0.5, 0.5});
    auto mu2 = coord_measure("Y", {-2.0, 2.0}, {0.5, 0.5});
    GridPtr g = make_grid({mu1.space(), mu2.space()});
    MartingaleProblem p{g, {mu1, mu2}, CostTensor(g, abs_payoff(g))};
    const PriceBounds pb = price_bounds(p);
    if (!pb.feasible || std::abs(pb.lower - 1.5) > 1e-9 || std::abs(pb.upper - 1.5) > 1e-9) {
      ok = false;
      detail = "four-point bounds differ from 1.5";
    }
  }
  {  // (b) Dirac start forces the product coupling
    auto mu1 = coord_measure("X", {0.0}, {1.0});
    auto mu2 = coord_measure("Y", {-1.0, 1.0}, {0.5, 0.5});
    GridPtr g = make_grid({mu1.space(), mu2.space()});
    MartingaleProblem p{g, {mu1, mu2}, CostTensor(g, abs_payoff(g))};
    const PriceBounds pb = price_bounds(p);
    if (!pb.feasible || std::abs(pb.lower - 1.0) > 1e-12 ||
        std::abs(pb.upper - 1.0) > 1e-12) {
      ok = false;
      detail = "Dirac-start bounds differ from 1";
    }
  }

  // (c) convex order vs phase-1 feasibility on 500 random pairs,
  // (d) conditional-mean residual on every feasible solve
  Rng rng(20244);
  std::uniform_int_distribution<std::size_t> ndist(2, 6);
  std::uniform_int_distribution<int> cdist(-5, 5);
  std::uniform_int_distribution<int> wdist(1, 9);
  auto random_atoms = [&](const std::string& id) {
    const std::size_t n = ndist(rng);
    std::vector<double> coords;
    while (coords.size() < n) {
      const double c = cdist(rng);
      bool dup = false;
      for (double x : coords) dup = dup || x == c;
      if (!dup) coords.push_back(c);
    }
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& v : w) {
      v = wdist(rng);
      sum += v;
    }
    for (double& v : w) v /= sum;  // rational weights
    return coord_measure(id, coords, w);
  };
  auto spread_of = [&](const DiscreteMeasure& mu, const std::string& id) {
    std::uniform_int_distribution<int> ddist(1, 2);
    std::map<double, double> target;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double d = ddist(rng);
      target[mu.space()->coordinate(i) - d] += mu.weight(i) / 2.0;
      target[mu.space()->coordinate(i) + d] += mu.weight(i) / 2.0;
    }
    std::vector<double> coords, w;
    for (const auto& [c, wt] : target) {
      coords.push_back(c);
      w.push_back(wt);
    }
    return coord_measure(id, std::move(coords), std::move(w));
  };

  int agreements = 0, ordered_count = 0;
  double worst_residual = 0.0;
  for (int t = 0; t < 500 && ok; ++t) {
    DiscreteMeasure mu1 = random_atoms("A" + std::to_string(t));
    DiscreteMeasure mu2 = (t % 2 == 0) ? spread_of(mu1, "B" + std::to_string(t))
                                       : random_atoms("B" + std::to_string(t));
    GridPtr g = make_grid({mu1.space(), mu2.space()});
    MartingaleProblem p{g, {mu1, mu2},
                        CostTensor(g, random_values(rng, g->cell_count()))};
    const ConstrainedProblem cp{g, p.marginals, p.payoff, martingale_generators(g)};
    const bool lp_feasible = check_feasible(cp).feasible;
    const bool cx = convex_order_check(mu1, mu2).ordered;
    if (lp_feasible != cx) {
      ok = false;
      detail = "convex order and phase-1 disagree at pair " + std::to_string(t);
      break;
    }
    ++agreements;
    if (cx) {
      ++ordered_count;
      const PriceBounds pb = price_bounds(p);
      if (!pb.feasible) {
        ok = false;
        detail = "ordered pair reported infeasible bounds";
        break;
      }
      const double res =
          std::max(conditional_mean_residual(*pb.lower_report.coupling),
                   conditional_mean_residual(*pb.upper_report.coupling));
      worst_residual = std::max(worst_residual, res);
      if (res > 1e-8) {
        ok = false;
        detail = "conditional-mean residual " + std::to_string(res);
        break;
      }
    }
  }
  if (ok && ordered_count < 100) {
    ok = false;
    detail = "too few ordered pairs to exercise the feasible branch";
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "bounds pinned; %d/500 pairs agree (%d feasible), residual <= %.1e",
                agreements, ordered_count, worst_residual);
  report(4, "martingale instantiation", ok, ok ? buf : detail);
}

// --- criterion 5: invariant instantiation ---
void criterion5() {
  bool ok = true;
  std::string detail;
  Rng rng(20245);
  std::uniform_int_distribution<std::size_t> sdist(2, 5);
  std::uniform_int_distribution<std::size_t> odist(2, 4);

  for (int t = 0; t < 100 && ok; ++t) {
    auto a = plain_space("A", sdist(rng));
    auto b = plain_space("B", sdist(rng));
    GridPtr grid = make_grid({a, b});
    const GroupAction g = random_cyclic_group(rng, *grid, odist(rng));
    std::vector<DiscreteMeasure> mus{random_invariant_measure(rng, a, g, 0),
                                     random_invariant_measure(rng, b, g, 1)};
    const ConstraintSet ws = reduce_generators(invariance_generators(g, grid));
    const CostTensor cost(grid, random_values(rng, grid->cell_count()));

    // (a) the product plan solves the feasibility question
    const Coupling prod = product_measure(grid, mus);
    for (const auto& gen : ws.generators()) {
      if (std::abs(integrate(std::span<const double>(gen.values), prod)) > 1e-10) {
        ok = false;
        detail = "product plan fails an invariance generator";
      }
    }
    const ConstrainedProblem p{grid, mus, cost, ws};
    if (ok && !check_feasible(p).feasible) {
      ok = false;
      detail = "invariant-marginal instance reported infeasible";
    }
    if (!ok) break;

    // (b) constrained value with c == unconstrained value with symmetrized c
    const InvariantReductionReport rep = invariant_reduction_check(p, g);
    if (std::abs(rep.constrained_value - rep.reduced_value) >
        1e-7 * (1.0 + std::abs(rep.constrained_value))) {
      ok = false;
      detail = "reduced-dual identity violated";
      break;
    }

    // (c) invariant costs: constrained == unconstrained with the cost itself
    const CostTensor cbar = symmetrize_function(cost, g);
    const ConstrainedProblem pc{grid, mus, cbar, ws};
    const ConstrainedProblem pu{grid, mus, cbar, ConstraintSet(grid)};
    const SolveReport rc = solve_primal(pc);
    const SolveReport ru = solve_primal(pu);
    if (rc.status != lp::Status::optimal || ru.status != lp::Status::optimal ||
        std::abs(rc.primal_value - ru.primal_value) >
            1e-7 * (1.0 + std::abs(rc.primal_value))) {
      ok = false;
      detail = "invariant-cost equality violated";
      break;
    }
  }

  // (d) projection idempotence on 100 random tensors
  for (int t = 0; t < 100 && ok; ++t) {
    auto a = plain_space("A", sdist(rng));
    auto b = plain_space("B", sdist(rng));
    GridPtr grid = make_grid({a, b});
    const GroupAction g = random_cyclic_group(rng, *grid, odist(rng));
    const CostTensor h(grid, random_values(rng, grid->cell_count()));
    const CostTensor once = projection_w1(h, g);
    const CostTensor twice = projection_w1(once, g);
    for (std::size_t i = 0; i < once.values().size(); ++i)
      if (std::abs(twice.value(i) - once.value(i)) > 1e-14) {
        ok = false;
        detail = "projection not idempotent at 1e-14";
      }
  }
  report(5, "invariant instantiation", ok,
         ok ? "100 instances: product feasibility, reduced duality, corollary, projection"
            : detail);
}

// --- criterion 6: LP core against vertex enumeration ---
void criterion6() {
  Rng rng(20246);
  std::uniform_int_distribution<int> entry(-5, 5);
  std::uniform_int_distribution<std::size_t> mdist(1, 8);
  std::uniform_int_distribution<std::size_t> ndist(1, 12);
  bool ok = true;
  std::string detail;
  int optimal_count = 0;
  for (int t = 0; t < 1000 && ok; ++t) {
    lp::Program p;
    p.rows = mdist(rng);
    p.cols = ndist(rng);
    p.objective.resize(p.cols);
    p.matrix.resize(p.rows * p.cols);
    p.rhs.resize(p.rows);
    for (double& v : p.objective) v = entry(rng);
    for (double& v : p.matrix) v = entry(rng);
    for (double& v : p.rhs) v = entry(rng);

    const auto expected = brute_force_lp(p);
    lp::Solution sol;
    try {
      sol = lp::solve(p);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("solver raised: ") + e.what();
      break;
    }
    if (sol.status != expected.status) {
      ok = false;
      detail = "status mismatch at instance " + std::to_string(t);
      break;
    }
    if (sol.status == lp::Status::optimal) {
      ++optimal_count;
      if (std::abs(sol.objective_value - expected.value) >
          1e-6 * (1.0 + std::abs(expected.value))) {
        ok = false;
        detail = "value mismatch at instance " + std::to_string(t);
        break;
      }
      for (std::size_t j = 0; j < p.cols; ++j) {
        double aty = 0.0;
        for (std::size_t i = 0; i < p.rows; ++i) aty += p.at(i, j) * sol.dual[i];
        const double slack = p.objective[j] - aty;
        if (slack < -1e-7 || sol.primal[j] * slack > 1e-7) {
          ok = false;
          detail = "complementary slackness violated at instance " + std::to_string(t);
          break;
        }
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "1000 LPs, %d optimal, values within 1e-6",
                optimal_count);
  report(6, "LP core vs vertex-enumeration oracle", ok, ok ? buf : detail);
}

// --- criterion 7: CLI contract ---
struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/lcot_acceptance_out.txt";
  const std::string cmd =
      std::string(LCOT_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(out_path.c_str());
  return r;
}

void criterion7() {
  const std::string fx = LCOT_FIXTURE_DIR;
  bool ok = true;
  std::string detail;

  const CliResult optimal = run_cli("solve --seed 42 " + fx + "/classical_2x2.json");
  if (optimal.exit_code != 0) {
    ok = false;
    detail = "expected exit 0, got " + std::to_string(optimal.exit_code);
  }
  if (ok && run_cli("solve " + fx + "/bad_weights.json").exit_code != 1) {
    ok = false;
    detail = "expected exit 1 on a malformed file";
  }
  if (ok && run_cli("solve " + fx + "/martingale_infeasible.json").exit_code != 2) {
    ok = false;
    detail = "expected exit 2 on an infeasible instance";
  }
  if (ok && run_cli("lp " + fx + "/unbounded_lp.json").exit_code != 3) {
    ok = false;
    detail = "expected exit 3 on an unbounded LP";
  }
  if (ok) {
    const CliResult again = run_cli("solve --seed 42 " + fx + "/classical_2x2.json");
    if (again.out != optimal.out) {
      ok = false;
      detail = "repeated runs are not byte-identical";
    }
  }
  if (ok) {
    std::ifstream golden(fx + "/golden/classical_2x2.report.json", std::ios::binary);
    std::ostringstream ss;
    ss << golden.rdbuf();
    if (ss.str().empty() || ss.str() != optimal.out) {
      ok = false;
      detail = "report differs from the committed golden";
    }
  }
  report(7, "CLI contract: exit codes 0/1/2/3 and byte-stable reports", ok,
         ok ? "four fixtures + golden comparison" : detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all criteria passed\n");
  return failures == 0 ? 0 : 1;
}
