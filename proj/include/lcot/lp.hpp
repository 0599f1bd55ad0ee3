#pragma once

#include <cstddef>
#include <vector>

#include "lcot/error.hpp"

namespace lcot::lp {

enum class Status { optimal, infeasible, unbounded };

const char* to_string(Status s);

/// Equality-standard-form program: minimize objective . x subject to
/// matrix x = rhs, x >= 0. The matrix is dense row-major.
struct Program {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> objective;  // length cols
  std::vector<double> matrix;     // rows * cols
  std::vector<double> rhs;        // length rows

  double& at(std::size_t i, std::size_t j) { return matrix[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return matrix[i * cols + j]; }
  void validate() const;
};

struct Solution {
  Status status = Status::optimal;
  double objective_value = 0.0;
  std::vector<double> primal;      // length cols, x >= -1e-9 (optimal only)
  std::vector<double> dual;        // length rows, row multipliers (optimal only)
  std::vector<double> certificate; // length rows (infeasible only): rhs.y > 0, A^T y <= 0
};

/// Two-phase dense primal simplex, Dantzig pricing with Bland's rule engaged
/// after 3 (rows + cols) iterations per phase. Deterministic: identical inputs
/// give bit-identical outputs. Every returned answer is verified against the
/// input system before it is handed back; a verification failure raises
/// numeric_error rather than returning a wrong certificate.
Solution solve(const Program& prog);

struct Feasibility {
  bool feasible = false;
  std::vector<double> witness;      // x >= 0 with A x = rhs, when feasible
  std::vector<double> certificate;  // Farkas row multipliers, when infeasible
};

/// Phase-1 only: decides whether {x >= 0 : A x = rhs} is nonempty.
/// The objective in `prog` is ignored.
Feasibility phase1_feasibility(const Program& prog);

/// Assembles programs with free variables and inequality rows, converting to
/// standard form (free x split into x+ - x-, slack columns per inequality) and
/// mapping solutions back to the declared variables.
class Builder {
 public:
  enum class Var { nonneg, free_sign };
  enum class Sense { eq, le, ge };

  /// Returns the index of the new variable.
  std::size_t add_variable(Var kind);
  /// `coeffs` is indexed by variable; missing trailing entries are zero.
  void add_row(std::vector<double> coeffs, Sense sense, double rhs);
  void set_objective(std::vector<double> coeffs);

  struct Result {
    Status status = Status::optimal;
    double objective_value = 0.0;
    std::vector<double> x;  // per declared variable
    std::vector<double> y;  // per declared row
    std::vector<double> certificate;  // per declared row, when infeasible
  };
  Result solve() const;

  std::size_t variable_count() const { return kinds_.size(); }
  std::size_t row_count() const { return rows_.size(); }

 private:
  struct Row {
    std::vector<double> coeffs;
    Sense sense;
    double rhs;
  };
  std::vector<Var> kinds_;
  std::vector<Row> rows_;
  std::vector<double> objective_;
};

}  // namespace lcot::lp
