#include <cstring>
#include <random>

#include "doctest.h"
#include "lcot/lp.hpp"
#include "oracle_lp.hpp"

using namespace lcot;
using lcot::test::brute_force_lp;

namespace {

lp::Program make_program(std::size_t rows, std::size_t cols, std::vector<double> obj,
                         std::vector<double> mat, std::vector<double> rhs) {
  lp::Program p;
  p.rows = rows;
  p.cols = cols;
  p.objective = std::move(obj);
  p.matrix = std::move(mat);
  p.rhs = std::move(rhs);
  return p;
}

}  // namespace

TEST_CASE("one binding constraint") {
  auto p = make_program(1, 2, {1, 0}, {1, 1}, {1});
  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::optimal);
  CHECK(sol.objective_value == doctest::Approx(0.0));
  CHECK(sol.primal[0] == doctest::Approx(0.0));
  CHECK(sol.primal[1] == doctest::Approx(1.0));
}

TEST_CASE("negative rhs with a nonnegative variable is infeasible") {
  auto p = make_program(1, 1, {0}, {1}, {-1});
  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::infeasible);
  REQUIRE(sol.certificate.size() == 1);
  CHECK(sol.certificate[0] * p.rhs[0] > 1e-9);
}

TEST_CASE("unconstrained negative direction is unbounded") {
  auto p = make_program(1, 1, {-1}, {0}, {0});
  auto sol = lp::solve(p);
  CHECK(sol.status == lp::Status::unbounded);
}

TEST_CASE("conflicting rows give the textbook certificate") {
  auto p = make_program(2, 1, {0}, {1, -1}, {1, 1});
  auto sol = lp::solve(p);
  REQUIRE(sol.status == lp::Status::infeasible);
  CHECK(sol.certificate[0] == doctest::Approx(1.0));
  CHECK(sol.certificate[1] == doctest::Approx(1.0));
}

TEST_CASE("near-zero rows: consistent ones drop, inconsistent ones refute") {
  auto drop = make_program(2, 2, {1, 1}, {1e-13, 0, 1, 1}, {1e-12, 1});
  auto sol = lp::solve(drop);
  CHECK(sol.status == lp::Status::optimal);

  auto bad = make_program(2, 2, {1, 1}, {1e-13, 0, 1, 1}, {0.5, 1});
  auto sol2 = lp::solve(bad);
  CHECK(sol2.status == lp::Status::infeasible);
}

TEST_CASE("phase1_feasibility verifies its witness and certificate") {
  auto p = make_program(1, 2, {}, {1, 1}, {1});
  p.objective.assign(2, 0.0);
  auto f = lp::phase1_feasibility(p);
  REQUIRE(f.feasible);
  CHECK(f.witness[0] + f.witness[1] == doctest::Approx(1.0));

  auto q = make_program(2, 1, {0}, {1, -1}, {1, 1});
  auto f2 = lp::phase1_feasibility(q);
  REQUIRE_FALSE(f2.feasible);
  double by = f2.certificate[0] * q.rhs[0] + f2.certificate[1] * q.rhs[1];
  CHECK(by > 1e-9);
}

TEST_CASE("constructed feasible systems are recognized") {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> entry(-5, 5);
  std::uniform_int_distribution<std::size_t> mdist(1, 6);
  std::uniform_int_distribution<std::size_t> ndist(1, 10);
  std::uniform_real_distribution<double> xdist(0.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = mdist(rng);
    const std::size_t n = ndist(rng);
    lp::Program p;
    p.rows = m;
    p.cols = n;
    p.objective.assign(n, 0.0);
    p.matrix.resize(m * n);
    for (double& v : p.matrix) v = entry(rng);
    std::vector<double> x0(n);
    for (double& v : x0) v = xdist(rng);
    p.rhs.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) p.rhs[i] += p.at(i, j) * x0[j];
    auto f = lp::phase1_feasibility(p);
    CHECK(f.feasible);
  }
}

TEST_CASE("determinism: identical inputs give bit-identical outputs") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> entry(-5, 5);
  lp::Program p;
  p.rows = 4;
  p.cols = 7;
  p.objective.resize(7);
  p.matrix.resize(28);
  p.rhs.resize(4);
  for (double& v : p.objective) v = entry(rng);
  for (double& v : p.matrix) v = entry(rng);
  for (double& v : p.rhs) v = std::abs(entry(rng));
  auto a = lp::solve(p);
  auto b = lp::solve(p);
  REQUIRE(a.status == b.status);
  if (a.status == lp::Status::optimal) {
    CHECK(std::memcmp(a.primal.data(), b.primal.data(), a.primal.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.dual.data(), b.dual.data(), a.dual.size() * sizeof(double)) == 0);
    CHECK(a.objective_value == b.objective_value);
  }
}

TEST_CASE("random LPs agree with the vertex-enumeration oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> entry(-5, 5);
  std::uniform_int_distribution<std::size_t> mdist(1, 8);
  std::uniform_int_distribution<std::size_t> ndist(1, 12);
  int optimal_count = 0, infeasible_count = 0, unbounded_count = 0;
  for (int t = 0; t < 300; ++t) {
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
    const auto sol = lp::solve(p);
    REQUIRE(sol.status == expected.status);
    if (sol.status == lp::Status::optimal) {
      ++optimal_count;
      CHECK(sol.objective_value == doctest::Approx(expected.value).epsilon(1e-6));
      // dual feasibility and complementary slackness
      for (std::size_t j = 0; j < p.cols; ++j) {
        double aty = 0.0;
        for (std::size_t i = 0; i < p.rows; ++i) aty += p.at(i, j) * sol.dual[i];
        const double slack = p.objective[j] - aty;
        CHECK(slack >= -1e-7);
        CHECK(sol.primal[j] * slack <= 1e-7);
      }
    } else if (sol.status == lp::Status::infeasible) {
      ++infeasible_count;
    } else {
      ++unbounded_count;
    }
  }
  // the generator must exercise all three statuses
  CHECK(optimal_count > 10);
  CHECK(infeasible_count > 10);
  CHECK(unbounded_count > 10);
}

TEST_CASE("builder splits free variables and maps duals back") {
  // min x with x free, y >= 0, s.t. x + y = 1 and -x <= 2; optimum x = -2
  lp::Builder b;
  const auto x = b.add_variable(lp::Builder::Var::free_sign);
  const auto y = b.add_variable(lp::Builder::Var::nonneg);
  b.add_row({1.0, 1.0}, lp::Builder::Sense::eq, 1.0);
  b.add_row({-1.0, 0.0}, lp::Builder::Sense::le, 2.0);
  b.set_objective({1.0, 0.0});
  auto r = b.solve();
  REQUIRE(r.status == lp::Status::optimal);
  CHECK(r.objective_value == doctest::Approx(-2.0));
  CHECK(r.x[x] == doctest::Approx(-2.0));
  CHECK(r.x[y] == doctest::Approx(3.0));
  CHECK(r.y.size() == 2);
}
