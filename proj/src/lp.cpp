#include "lcot/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcot::lp {

namespace {

constexpr double kPivotTol = 1e-9;   // reduced-cost (pricing) tolerance
constexpr double kRatioTol = 1e-7;   // smallest admissible pivot element
constexpr double kZeroEntryTol = 1e-11;
constexpr double kZeroRhsTol = 1e-9;
constexpr std::size_t kNoIndex = static_cast<std::size_t>(-1);

double linf(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Dense two-phase tableau. Artificial columns are kept through phase 2: they
// hold the basis inverse, so the row multipliers y = c_B B^-1 can be read off
// the final basis directly.
class Simplex {
 public:
  explicit Simplex(const Program& prog) : prog_(prog), n_(prog.cols) {
    prog_.validate();
    preprocess();
  }

  // True when a near-zero row with non-zero rhs makes the system trivially
  // inconsistent; `certificate` is then already filled.
  bool trivially_infeasible() const { return trivially_infeasible_; }
  std::vector<double> trivial_certificate() const { return trivial_certificate_; }

  // Runs phase 1. Returns the phase-1 objective (sum of artificial values).
  double run_phase1() {
    build_tableau();
    // phase-1 reduced costs: artificials cost 1, all basic
    for (std::size_t j = 0; j < n_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m_; ++i) s += t(i, j);
      z_[j] = -s;
    }
    for (std::size_t j = n_; j < n_ + m_; ++j) z_[j] = 0.0;
    if (pivot_loop() == Loop::unbounded)
      throw numeric_error("simplex: phase 1 reported an unbounded direction");
    double v = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) v += std::max(rhs(i), 0.0);
    return v;
  }

  // Farkas certificate from the phase-1 optimum, in original row order.
  // Recomputed from the final tableau (the artificial block holds the basis
  // inverse) rather than from the incrementally maintained cost row.
  std::vector<double> infeasibility_certificate() const {
    std::vector<double> y(prog_.rows, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double yr = 0.0;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= n_) yr += t(i, n_ + r);  // phase-1 cost of artificials is 1
      y[kept_[r]] = flip_[r] * yr;
    }
    return y;
  }

  // Phase-1 basic solution over the original columns.
  std::vector<double> primal_point() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = rhs(i);
    return x;
  }

  // Pivots basic artificials out where possible, installs the real objective,
  // and optimizes. Returns false when the program is unbounded.
  bool run_phase2() {
    drive_out_artificials();
    for (std::size_t j = 0; j < n_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] < n_) s += prog_.objective[basis_[i]] * t(i, j);
      z_[j] = prog_.objective[j] - s;
    }
    for (std::size_t j = n_; j < n_ + m_; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] < n_) s += prog_.objective[basis_[i]] * t(i, j);
      z_[j] = -s;
    }
    for (std::size_t i = 0; i < m_; ++i) z_[basis_[i]] = 0.0;
    return pivot_loop() == Loop::optimal;
  }

  std::vector<double> duals() const {
    std::vector<double> y(prog_.rows, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double yr = 0.0;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] < n_) yr += prog_.objective[basis_[i]] * t(i, n_ + r);
      y[kept_[r]] = flip_[r] * yr;
    }
    return y;
  }

 private:
  enum class Loop { optimal, unbounded };

  void preprocess() {
    for (std::size_t i = 0; i < prog_.rows; ++i) {
      double maxabs = 0.0;
      for (std::size_t j = 0; j < n_; ++j) maxabs = std::max(maxabs, std::abs(prog_.at(i, j)));
      if (maxabs < kZeroEntryTol) {
        if (std::abs(prog_.rhs[i]) < kZeroRhsTol) continue;  // redundant, drop
        trivially_infeasible_ = true;
        trivial_certificate_.assign(prog_.rows, 0.0);
        trivial_certificate_[i] = prog_.rhs[i] > 0.0 ? 1.0 : -1.0;
        return;
      }
      kept_.push_back(i);
      flip_.push_back(prog_.rhs[i] < 0.0 ? -1.0 : 1.0);
    }
    m_ = kept_.size();
  }

  void build_tableau() {
    width_ = n_ + m_ + 1;
    t_.assign(m_ * width_, 0.0);
    z_.assign(n_ + m_, 0.0);
    basis_.resize(m_);
    active_.assign(m_, 1);
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t i = kept_[r];
      const double s = flip_[r];
      for (std::size_t j = 0; j < n_; ++j) t(r, j) = s * prog_.at(i, j);
      t(r, n_ + r) = 1.0;
      rhs(r) = s * prog_.rhs[i];
      basis_[r] = n_ + r;
    }
  }

  double& t(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double t(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
  double& rhs(std::size_t i) { return t_[i * width_ + n_ + m_]; }
  double rhs(std::size_t i) const { return t_[i * width_ + n_ + m_]; }

  bool is_basic(std::size_t col) const {
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] == col) return true;
    return false;
  }

  Loop pivot_loop() {
    std::vector<char> basic(n_ + m_, 0);
    for (std::size_t b : basis_) basic[b] = 1;
    const std::size_t bland_after = 3 * (m_ + n_);
    const std::size_t hard_cap = 10000 + 500 * (m_ + n_);
    for (std::size_t iter = 0;; ++iter) {
      if (iter > hard_cap)
        throw numeric_error("simplex: iteration limit exceeded, pivoting cannot proceed");
      // entering column; artificial columns never re-enter
      std::size_t enter = kNoIndex;
      if (iter < bland_after) {
        double best = -kPivotTol;
        for (std::size_t j = 0; j < n_; ++j)
          if (!basic[j] && z_[j] < best) {
            best = z_[j];
            enter = j;
          }
      } else {
        for (std::size_t j = 0; j < n_; ++j)
          if (!basic[j] && z_[j] < -kPivotTol) {
            enter = j;
            break;
          }
      }
      if (enter == kNoIndex) return Loop::optimal;

      // ratio test over active rows; within ties, Dantzig mode prefers the
      // largest pivot element (stability) and Bland mode the smallest basis
      // index (termination)
      std::size_t leave = kNoIndex;
      double best_piv = 0.0;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (!active_[i]) continue;
        const double a = t(i, enter);
        if (a <= kRatioTol) continue;
        const double ratio = std::max(rhs(i), 0.0) / a;
        const double band = 1e-9 * (1.0 + best_ratio);
        if (leave == kNoIndex || ratio < best_ratio - band) {
          best_ratio = ratio;
          best_piv = a;
          leave = i;
        } else if (ratio <= best_ratio + band) {
          const bool better = (iter < bland_after) ? (a > best_piv)
                                                   : (basis_[i] < basis_[leave]);
          if (better) {
            best_ratio = std::min(best_ratio, ratio);
            best_piv = a;
            leave = i;
          }
        }
      }
      if (leave == kNoIndex) return Loop::unbounded;

      basic[basis_[leave]] = 0;
      basic[enter] = 1;
      basis_[leave] = enter;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const double inv = 1.0 / t(row, col);
    double* pr = &t_[row * width_];
    for (std::size_t j = 0; j < width_; ++j) pr[j] *= inv;
    pr[col] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f == 0.0) continue;
      double* ri = &t_[i * width_];
      for (std::size_t j = 0; j < width_; ++j) ri[j] -= f * pr[j];
      ri[col] = 0.0;
    }
    const double zf = z_[col];
    if (zf != 0.0) {
      for (std::size_t j = 0; j < n_ + m_; ++j) z_[j] -= zf * pr[j];
      z_[col] = 0.0;
    }
  }

  // Basic artificials at the phase boundary carry only the sub-tolerance
  // phase-1 residual, which is discarded before pivoting them out so the
  // replacement variable enters at exactly zero. A row whose entries are all
  // below the threshold is dependent (or indistinguishable from dependent)
  // and is deactivated: it never pivots again and its dual reads as zero, a
  // valid completion for a redundant row. Pivoting on noise-level entries
  // would poison the basis inverse, so the threshold is deliberately coarse.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      rhs(i) = 0.0;
      std::size_t best = kNoIndex;
      double best_abs = 1e-6;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic(j)) continue;
        const double a = std::abs(t(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best != kNoIndex) {
        basis_[i] = best;
        pivot(i, best);
      } else {
        active_[i] = 0;
      }
    }
  }

  const Program& prog_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t width_ = 0;
  std::vector<std::size_t> kept_;
  std::vector<double> flip_;
  std::vector<double> t_;
  std::vector<double> z_;
  std::vector<std::size_t> basis_;
  std::vector<char> active_;
  bool trivially_infeasible_ = false;
  std::vector<double> trivial_certificate_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void verify_infeasibility_certificate(const Program& prog, const std::vector<double>& y) {
  const double by = dot(prog.rhs, y);
  if (!(by > 1e-9))
    throw numeric_error("simplex: infeasibility certificate failed rhs.y > 0 check");
  for (std::size_t j = 0; j < prog.cols; ++j) {
    double aty = 0.0;
    for (std::size_t i = 0; i < prog.rows; ++i) aty += prog.at(i, j) * y[i];
    if (!(aty <= 1e-9))
      throw numeric_error("simplex: infeasibility certificate failed A^T y <= 0 check");
  }
}

void verify_primal_point(const Program& prog, const std::vector<double>& x) {
  const double row_tol = 1e-8 * (1.0 + linf(prog.rhs));
  for (double v : x)
    if (!(v >= -1e-9)) throw numeric_error("simplex: solution violates x >= 0");
  for (std::size_t i = 0; i < prog.rows; ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < prog.cols; ++j) ax += prog.at(i, j) * x[j];
    if (!(std::abs(ax - prog.rhs[i]) <= row_tol))
      throw numeric_error("simplex: solution violates a constraint row");
  }
}

void verify_optimal(const Program& prog, const Solution& sol) {
  verify_primal_point(prog, sol.primal);
  const double value = sol.objective_value;
  for (std::size_t j = 0; j < prog.cols; ++j) {
    double aty = 0.0;
    for (std::size_t i = 0; i < prog.rows; ++i) aty += prog.at(i, j) * sol.dual[i];
    const double slack = prog.objective[j] - aty;
    if (!(slack >= -1e-7))
      throw numeric_error("simplex: dual infeasible at optimality");
    if (!(sol.primal[j] * slack <= 1e-7))
      throw numeric_error("simplex: complementary slackness violated");
  }
  const double by = dot(prog.rhs, sol.dual);
  if (!(std::abs(value - by) <= 1e-7 * (1.0 + std::abs(value))))
    throw numeric_error("simplex: duality gap at optimality");
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
  }
  return "unknown";
}

void Program::validate() const {
  if (rows < 1 || cols < 1) throw validation_error("lp: need at least one row and one column");
  if (objective.size() != cols) throw validation_error("lp: objective length mismatch");
  if (matrix.size() != rows * cols) throw validation_error("lp: matrix shape mismatch");
  if (rhs.size() != rows) throw validation_error("lp: rhs length mismatch");
  for (double v : objective)
    if (!std::isfinite(v)) throw validation_error("lp: non-finite objective entry");
  for (double v : matrix)
    if (!std::isfinite(v)) throw validation_error("lp: non-finite matrix entry");
  for (double v : rhs)
    if (!std::isfinite(v)) throw validation_error("lp: non-finite rhs entry");
}

Solution solve(const Program& prog) {
  Simplex sx(prog);
  Solution sol;
  if (sx.trivially_infeasible()) {
    sol.status = Status::infeasible;
    sol.certificate = sx.trivial_certificate();
    verify_infeasibility_certificate(prog, sol.certificate);
    return sol;
  }
  const double phase1 = sx.run_phase1();
  const double feas_tol = 1e-9 * (1.0 + linf(prog.rhs));
  if (phase1 > feas_tol) {
    sol.status = Status::infeasible;
    sol.certificate = sx.infeasibility_certificate();
    verify_infeasibility_certificate(prog, sol.certificate);
    return sol;
  }
  if (!sx.run_phase2()) {
    sol.status = Status::unbounded;
    return sol;
  }
  sol.status = Status::optimal;
  sol.primal = sx.primal_point();
  sol.dual = sx.duals();
  sol.objective_value = dot(prog.objective, sol.primal);
  verify_optimal(prog, sol);
  return sol;
}

Feasibility phase1_feasibility(const Program& prog) {
  Program p = prog;
  if (p.objective.empty()) p.objective.assign(p.cols, 0.0);
  Simplex sx(p);
  Feasibility out;
  if (sx.trivially_infeasible()) {
    out.feasible = false;
    out.certificate = sx.trivial_certificate();
    verify_infeasibility_certificate(p, out.certificate);
    return out;
  }
  const double phase1 = sx.run_phase1();
  const double feas_tol = 1e-9 * (1.0 + linf(p.rhs));
  if (phase1 > feas_tol) {
    out.feasible = false;
    out.certificate = sx.infeasibility_certificate();
    verify_infeasibility_certificate(p, out.certificate);
    return out;
  }
  out.feasible = true;
  out.witness = sx.primal_point();
  verify_primal_point(p, out.witness);
  return out;
}

std::size_t Builder::add_variable(Var kind) {
  kinds_.push_back(kind);
  return kinds_.size() - 1;
}

void Builder::add_row(std::vector<double> coeffs, Sense sense, double rhs) {
  if (coeffs.size() > kinds_.size())
    throw validation_error("lp builder: row references undeclared variables");
  rows_.push_back(Row{std::move(coeffs), sense, rhs});
}

void Builder::set_objective(std::vector<double> coeffs) {
  if (coeffs.size() > kinds_.size())
    throw validation_error("lp builder: objective references undeclared variables");
  objective_ = std::move(coeffs);
}

Builder::Result Builder::solve() const {
  // column layout: split/plain variable columns first, then one slack per inequality
  std::vector<std::size_t> first_col(kinds_.size());
  std::size_t ncols = 0;
  for (std::size_t v = 0; v < kinds_.size(); ++v) {
    first_col[v] = ncols;
    ncols += kinds_[v] == Var::free_sign ? 2 : 1;
  }
  std::size_t nslack = 0;
  for (const auto& r : rows_)
    if (r.sense != Sense::eq) ++nslack;

  Program p;
  p.rows = rows_.size();
  p.cols = ncols + nslack;
  p.objective.assign(p.cols, 0.0);
  p.matrix.assign(p.rows * p.cols, 0.0);
  p.rhs.resize(p.rows);

  for (std::size_t v = 0; v < objective_.size(); ++v) {
    p.objective[first_col[v]] = objective_[v];
    if (kinds_[v] == Var::free_sign) p.objective[first_col[v] + 1] = -objective_[v];
  }
  std::size_t slack = ncols;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Row& r = rows_[i];
    for (std::size_t v = 0; v < r.coeffs.size(); ++v) {
      p.at(i, first_col[v]) = r.coeffs[v];
      if (kinds_[v] == Var::free_sign) p.at(i, first_col[v] + 1) = -r.coeffs[v];
    }
    if (r.sense == Sense::le) p.at(i, slack++) = 1.0;
    if (r.sense == Sense::ge) p.at(i, slack++) = -1.0;
    p.rhs[i] = r.rhs;
  }

  const Solution sol = lp::solve(p);
  Result out;
  out.status = sol.status;
  out.objective_value = sol.objective_value;
  if (sol.status == Status::optimal) {
    out.x.resize(kinds_.size());
    for (std::size_t v = 0; v < kinds_.size(); ++v) {
      out.x[v] = sol.primal[first_col[v]];
      if (kinds_[v] == Var::free_sign) out.x[v] -= sol.primal[first_col[v] + 1];
    }
    out.y = sol.dual;
  } else if (sol.status == Status::infeasible) {
    out.certificate = sol.certificate;
  }
  return out;
}

}  // namespace lcot::lp
