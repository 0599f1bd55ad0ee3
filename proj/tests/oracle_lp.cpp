#include "oracle_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lcot::test {

namespace {

// Solves A[:, cols] x = rhs by Gaussian elimination with partial pivoting.
// Returns false when the selected columns are rank deficient or rhs leaves
// their span.
bool solve_subset(const lp::Program& prog, const std::vector<std::size_t>& cols,
                  std::vector<double>& x, double res_tol) {
  const std::size_t m = prog.rows;
  const std::size_t k = cols.size();
  const std::size_t w = k + 1;
  std::vector<double> a(m * w);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i * w + j] = prog.at(i, cols[j]);
    a[i * w + k] = prog.rhs[i];
  }
  std::vector<std::size_t> pivot_row(k);
  std::size_t row = 0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t best = row;
    double best_abs = 0.0;
    for (std::size_t r = row; r < m; ++r) {
      const double v = std::abs(a[r * w + col]);
      if (v > best_abs) {
        best_abs = v;
        best = r;
      }
    }
    if (best_abs < 1e-7) return false;  // rank deficient
    if (best != row)
      for (std::size_t j = 0; j < w; ++j) std::swap(a[best * w + j], a[row * w + j]);
    const double inv = 1.0 / a[row * w + col];
    for (std::size_t r = row + 1; r < m; ++r) {
      const double f = a[r * w + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < w; ++j) a[r * w + j] -= f * a[row * w + j];
    }
    pivot_row[col] = row;
    if (++row == m && col + 1 < k) return false;  // more columns than rank
  }
  for (std::size_t r = row; r < m; ++r)
    if (std::abs(a[r * w + k]) > res_tol) return false;  // rhs outside the span
  x.assign(k, 0.0);
  for (std::size_t col = k; col-- > 0;) {
    const std::size_t r = pivot_row[col];
    double v = a[r * w + k];
    for (std::size_t j = col + 1; j < k; ++j) v -= a[r * w + j] * x[j];
    x[col] = v / a[r * w + col];
  }
  return true;
}

// min of objective over basic feasible points; +inf when none exists
double vertex_minimum(const lp::Program& prog, bool& feasible) {
  const std::size_t n = prog.cols;
  const std::size_t kmax = std::min(prog.rows, n);
  const double res_tol = 1e-6;
  double best = std::numeric_limits<double>::infinity();
  feasible = false;
  std::vector<double> x;
  for (std::size_t k = 0; k <= kmax; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    if (k > n) break;
    for (;;) {
      if (solve_subset(prog, idx, x, res_tol)) {
        bool nonneg = true;
        for (double v : x)
          if (v < -1e-9) {
            nonneg = false;
            break;
          }
        if (nonneg) {
          feasible = true;
          double obj = 0.0;
          for (std::size_t j = 0; j < k; ++j) obj += prog.objective[idx[j]] * x[j];
          best = std::min(best, obj);
        }
      }
      if (k == 0) break;
      std::size_t i = k;
      bool advanced = false;
      while (i-- > 0) {
        if (idx[i] < n - k + i) {
          ++idx[i];
          for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }
  return best;
}

}  // namespace

OracleResult brute_force_lp(const lp::Program& prog) {
  bool feasible = false;
  const double best = vertex_minimum(prog, feasible);
  if (!feasible) return {lp::Status::infeasible, 0.0};

  // recession cone, normalized: A d = 0, sum d = 1, d >= 0
  lp::Program rec;
  rec.cols = prog.cols;
  rec.rows = prog.rows + 1;
  rec.objective = prog.objective;
  rec.matrix.assign(rec.rows * rec.cols, 0.0);
  rec.rhs.assign(rec.rows, 0.0);
  for (std::size_t i = 0; i < prog.rows; ++i)
    for (std::size_t j = 0; j < prog.cols; ++j) rec.at(i, j) = prog.at(i, j);
  for (std::size_t j = 0; j < prog.cols; ++j) rec.at(prog.rows, j) = 1.0;
  rec.rhs[prog.rows] = 1.0;

  bool ray_exists = false;
  const double ray_min = vertex_minimum(rec, ray_exists);
  if (ray_exists && ray_min < -1e-7) return {lp::Status::unbounded, 0.0};
  return {lp::Status::optimal, best};
}

}  // namespace lcot::test
