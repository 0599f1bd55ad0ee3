#include "doctest.h"
#include "lcot/constraints.hpp"
#include "lcot/lp.hpp"
#include "lcot/martingale.hpp"
#include "lcot/solver.hpp"
#include "test_util.hpp"

using namespace lcot;
using namespace lcot::test;

TEST_CASE("assemble_rows: empty set, constant generator") {
  auto a = plain_space("A", 2);
  auto b = plain_space("B", 2);
  GridPtr g = make_grid({a, b});

  ConstraintSet empty(g);
  CHECK(assemble_rows(empty).empty());

  ConstraintSet ones(g);
  ones.add(ConstraintGenerator{"one", {1, 1, 1, 1}});
  auto rows = assemble_rows(ones);
  REQUIRE(rows.size() == 4);
  for (double v : rows) CHECK(v == 1.0);
  // a probability coupling cannot integrate a positive constant to zero
  ConstrainedProblem p{g,
                       {DiscreteMeasure(a, {0.5, 0.5}), DiscreteMeasure(b, {0.5, 0.5})},
                       CostTensor(g, {0, 0, 0, 0}),
                       ones};
  CHECK_FALSE(check_feasible(p).feasible);
}

TEST_CASE("martingale generator rows match the hand-written tensor") {
  auto x = make_coordinate_space("X", {-1.0, 1.0});
  auto y = make_coordinate_space("Y", {-2.0, 2.0});
  GridPtr g = make_grid({x, y});
  ConstraintSet ws = martingale_generators(g);
  REQUIRE(ws.size() == 2);
  // generator for the prefix x = -1: values (y - x) on that row, zero elsewhere
  const auto& g0 = ws.generators()[0].values;
  CHECK(g0 == std::vector<double>{-1.0, 3.0, 0.0, 0.0});
  const auto& g1 = ws.generators()[1].values;
  CHECK(g1 == std::vector<double>{0.0, 0.0, -3.0, 1.0});
}

TEST_CASE("duplicate generator names are rejected") {
  auto a = plain_space("A", 2);
  GridPtr g = make_grid({a});
  ConstraintSet ws(g);
  ws.add(ConstraintGenerator{"w", {1, -1}});
  CHECK_THROWS_AS(ws.add(ConstraintGenerator{"w", {1, 0}}), validation_error);
}

TEST_CASE("reduce_generators drops scalar multiples and exact sums") {
  auto a = plain_space("A", 2);
  auto b = plain_space("B", 2);
  GridPtr g = make_grid({a, b});

  ConstraintSet pair(g);
  pair.add(ConstraintGenerator{"w", {1, 2, 3, 4}});
  pair.add(ConstraintGenerator{"2w", {2, 4, 6, 8}});
  CHECK(reduce_generators(pair).size() == 1);

  ConstraintSet triple(g);
  triple.add(ConstraintGenerator{"w1", {1, 0, 0, 0}});
  triple.add(ConstraintGenerator{"w2", {0, 1, 0, 0}});
  triple.add(ConstraintGenerator{"w1+w2", {1, 1, 0, 0}});
  auto reduced = reduce_generators(triple);
  CHECK(reduced.size() == 2);
  CHECK(reduced.generators()[0].name == "w1");
  CHECK(reduced.generators()[1].name == "w2");
}

TEST_CASE("reduce_generators recovers the constructed rank") {
  Rng rng(17);
  auto a = plain_space("A", 3);
  auto b = plain_space("B", 4);
  GridPtr g = make_grid({a, b});
  std::vector<std::vector<double>> basis;
  for (int i = 0; i < 6; ++i) basis.push_back(random_values(rng, 12));
  ConstraintSet ws(g);
  for (int i = 0; i < 6; ++i)
    ws.add(ConstraintGenerator{"b" + std::to_string(i), basis[i]});
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int i = 0; i < 4; ++i) {
    std::vector<double> combo(12, 0.0);
    for (int j = 0; j < 6; ++j) {
      const double c = coeff(rng);
      for (int k = 0; k < 12; ++k) combo[k] += c * basis[j][k];
    }
    ws.add(ConstraintGenerator{"c" + std::to_string(i), std::move(combo)});
  }
  CHECK(ws.size() == 10);
  CHECK(reduce_generators(ws).size() == 6);
}

TEST_CASE("LP row dot product equals the generator integral") {
  Rng rng(23);
  auto a = plain_space("A", 3);
  auto b = plain_space("B", 3);
  GridPtr g = make_grid({a, b});
  ConstraintSet ws(g);
  ws.add(ConstraintGenerator{"w", random_values(rng, 9)});
  auto rows = assemble_rows(ws);
  Coupling pi(g, random_simplex(rng, 9));
  double dot = 0.0;
  for (std::size_t i = 0; i < 9; ++i) dot += rows[i] * pi.weight(i);
  CHECK(dot ==
        doctest::Approx(integrate(std::span<const double>(ws.generators()[0].values), pi))
            .epsilon(1e-12));
}

TEST_CASE("reduction preserves feasibility and optimal value") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    ConstrainedProblem p = random_feasible_instance(rng, 4, 4);
    // duplicate scaled generators to force dependence
    ConstraintSet padded(p.grid);
    for (const auto& gen : p.constraints.generators()) padded.add(gen);
    for (const auto& gen : p.constraints.generators()) {
      std::vector<double> doubled = gen.values;
      for (double& v : doubled) v *= 2.0;
      padded.add(ConstraintGenerator{gen.name + "_x2", std::move(doubled)});
    }
    ConstrainedProblem q{p.grid, p.marginals, p.cost, reduce_generators(padded)};
    CHECK(q.constraints.size() <= p.constraints.size());
    const auto ra = solve_primal(p);
    const auto rb = solve_primal(q);
    REQUIRE(ra.status == lp::Status::optimal);
    REQUIRE(rb.status == lp::Status::optimal);
    CHECK(ra.primal_value == doctest::Approx(rb.primal_value).epsilon(1e-7));
  }
}

TEST_CASE("marginal compatibility: multi-coordinate, compatible, violating") {
  auto a = make_coordinate_space("A", {0.0, 1.0});
  auto b = make_coordinate_space("B", {0.0, 1.0});
  GridPtr g = make_grid({a, b});
  std::vector<DiscreteMeasure> mus{DiscreteMeasure(a, {0.5, 0.5}),
                                   DiscreteMeasure(b, {0.5, 0.5})};

  ConstraintSet ws(g);
  ws.add(ConstraintGenerator{"xy_diff", {0, -1, 1, 0}});  // x - y: varies in both
  ws.add(ConstraintGenerator{"odd_x", {1, 1, -1, -1}});   // f(x) = (1, -1)
  ws.add(ConstraintGenerator{"ind_x0", {1, 1, 0, 0}});    // f(x) = (1, 0)
  auto rep = check_marginal_compatibility(ws, mus);
  REQUIRE(rep.entries.size() == 3);
  CHECK_FALSE(rep.entries[0].applicable);
  CHECK(rep.entries[1].applicable);
  CHECK(rep.entries[1].factor == 0);
  CHECK(rep.entries[1].integral == doctest::Approx(0.0));
  CHECK_FALSE(rep.entries[1].violated);
  CHECK(rep.entries[2].applicable);
  CHECK(rep.entries[2].integral == doctest::Approx(0.5));
  CHECK(rep.entries[2].violated);
  CHECK_FALSE(rep.all_compatible);
}

TEST_CASE("a violating single-coordinate generator implies infeasibility") {
  Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    auto a = plain_space("A", 3);
    auto b = plain_space("B", 3);
    GridPtr g = make_grid({a, b});
    std::vector<DiscreteMeasure> mus{random_measure(rng, a), random_measure(rng, b)};
    // single-coordinate generator f(x) with a nonzero integral against mu_1
    std::vector<double> f = random_values(rng, 3, 0.5, 2.0);
    std::vector<double> vals(9);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) vals[i * 3 + j] = f[i];
    ConstraintSet ws(g);
    ws.add(ConstraintGenerator{"f", std::move(vals)});
    auto rep = check_marginal_compatibility(ws, mus);
    REQUIRE(rep.entries[0].applicable);
    REQUIRE(rep.entries[0].violated);  // positive f has a positive integral
    ConstrainedProblem p{g, mus, CostTensor(g, std::vector<double>(9, 0.0)), ws};
    CHECK_FALSE(check_feasible(p).feasible);
  }
}
