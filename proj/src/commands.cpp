#include <cmath>

#include "json.hpp"
#include "lcot/json_out.hpp"
#include "lcot/problem_io.hpp"

namespace lcot {

namespace {

void emit_sparse_coupling(JsonWriter& w, const Coupling& pi) {
  const ProductGrid& g = *pi.grid();
  std::vector<std::size_t> multi(g.factor_count());
  w.begin_array();
  for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
    if (pi.weight(flat) <= 1e-12) continue;
    g.multi_index(flat, multi);
    w.begin_object();
    w.key("index").begin_array();
    for (std::size_t i : multi) w.value(i);
    w.end_array();
    w.key("weight").value(pi.weight(flat));
    w.end_object();
  }
  w.end_array();
}

void emit_certificate(JsonWriter& w, const ParsedProblem& p, const DualCertificate& cert) {
  w.begin_object();
  w.key("potentials").begin_array();
  for (std::size_t k = 0; k < cert.potentials.size(); ++k) {
    w.begin_object();
    w.key("space").value(p.grid->factor(k)->id());
    w.key("values").begin_array();
    for (double v : cert.potentials[k]) w.value(v);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.key("multipliers").begin_array();
  for (std::size_t j = 0; j < cert.multipliers.size(); ++j) {
    w.begin_object();
    w.key("generator").value(p.constraints.generators()[j].name);
    w.key("value").value(cert.multipliers[j]);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

void emit_infeasibility(JsonWriter& w, const ParsedProblem& p,
                        const InfeasibilityCertificate& cert) {
  w.begin_object();
  w.key("marginal_rows").begin_array();
  for (std::size_t k = 0; k < cert.marginal_rows.size(); ++k) {
    w.begin_object();
    w.key("space").value(p.grid->factor(k)->id());
    w.key("values").begin_array();
    for (double v : cert.marginal_rows[k]) w.value(v);
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.key("generator_rows").begin_array();
  for (std::size_t j = 0; j < cert.generator_rows.size(); ++j) {
    w.begin_object();
    w.key("generator").value(p.constraints.generators()[j].name);
    w.key("value").value(cert.generator_rows[j]);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

void emit_solve_body(JsonWriter& w, const ParsedProblem& p, const SolveReport& r) {
  w.key("status").value(lp::to_string(r.status));
  if (r.status == lp::Status::optimal) {
    w.key("primal_value").value(r.primal_value);
    w.key("dual_value").value(r.dual_value);
    w.key("gap").value(r.gap);
    w.key("coupling");
    emit_sparse_coupling(w, *r.coupling);
    w.key("certificate");
    emit_certificate(w, p, *r.certificate);
  } else if (r.status == lp::Status::infeasible) {
    w.key("infeasibility_certificate");
    emit_infeasibility(w, p, *r.infeasibility);
  }
  w.key("diagnostics").begin_object();
  w.key("feasible").value(r.status == lp::Status::optimal);
  if (r.status == lp::Status::optimal) {
    if (p.mode == ParsedProblem::ConstraintMode::martingale)
      w.key("conditional_mean_residual").value(conditional_mean_residual(*r.coupling));
    if (p.mode == ParsedProblem::ConstraintMode::group)
      w.key("invariance_residual").value(coupling_invariance_residual(*r.coupling, *p.group));
  }
  w.end_object();
}

void emit_convex_order(JsonWriter& w, const ConvexOrderResult& res) {
  w.begin_object();
  w.key("ordered").value(res.ordered);
  w.key("mean_first").value(res.mean_first);
  w.key("mean_second").value(res.mean_second);
  if (res.witness_strike) {
    w.key("witness_strike").value(*res.witness_strike);
    w.key("call_first").value(res.call_first);
    w.key("call_second").value(res.call_second);
  }
  w.end_object();
}

Outcome outcome_of(lp::Status s) {
  switch (s) {
    case lp::Status::optimal: return Outcome::ok;
    case lp::Status::infeasible: return Outcome::failed;
    case lp::Status::unbounded: return Outcome::unbounded;
  }
  return Outcome::failed;
}

}  // namespace

std::string run_solve(const ParsedProblem& p, const CommandOptions& opts, Outcome& outcome) {
  const SolveReport report = solve_primal(p.problem(), opts.normalize_potentials);
  outcome = outcome_of(report.status);
  JsonWriter w;
  w.begin_object();
  emit_solve_body(w, p, report);
  w.end_object();
  return w.take();
}

std::string run_bounds(const ParsedProblem& p, const CommandOptions& opts, Outcome& outcome) {
  if (p.mode != ParsedProblem::ConstraintMode::martingale)
    throw validation_error("bounds: the problem must declare martingale constraints");
  const MartingaleProblem mp{p.grid, p.marginals, p.cost};
  const PriceBounds pb = price_bounds(mp, opts.normalize_potentials);
  outcome = pb.feasible ? Outcome::ok : Outcome::failed;

  JsonWriter w;
  w.begin_object();
  w.key("status").value(pb.feasible ? "optimal" : "infeasible");
  if (pb.feasible) {
    w.key("lower").value(pb.lower);
    w.key("upper").value(pb.upper);
  }
  if (p.grid->factor_count() == 2) {
    w.key("convex_order");
    emit_convex_order(w, convex_order_check(p.marginals[0], p.marginals[1]));
  }
  w.key("lower_report").begin_object();
  emit_solve_body(w, p, pb.lower_report);
  w.end_object();
  if (pb.feasible) {
    w.key("upper_report").begin_object();
    emit_solve_body(w, p, pb.upper_report);
    w.end_object();
  }
  w.end_object();
  return w.take();
}

std::string run_check(const ParsedProblem& p, CheckKind kind, const CommandOptions& opts,
                      Outcome& outcome) {
  JsonWriter w;
  w.begin_object();
  switch (kind) {
    case CheckKind::feasible: {
      const FeasibilityReport fr = check_feasible(p.problem());
      outcome = fr.feasible ? Outcome::ok : Outcome::failed;
      w.key("check").value("feasible");
      w.key("passed").value(fr.feasible);
      if (fr.feasible) {
        w.key("witness");
        emit_sparse_coupling(w, *fr.witness);
      } else {
        w.key("certificate");
        emit_infeasibility(w, p, *fr.certificate);
      }
      break;
    }
    case CheckKind::monotone: {
      w.key("check").value("monotone");
      const SolveReport report = solve_primal(p.problem());
      if (report.status != lp::Status::optimal) {
        outcome = Outcome::failed;
        w.key("passed").value(false);
        w.key("status").value(lp::to_string(report.status));
        break;
      }
      const MonotonicityVerdict verdict = verify_solution_monotone(
          report, p.problem(), opts.m_max, opts.trials, opts.tol, opts.seed);
      outcome = verdict.passed ? Outcome::ok : Outcome::failed;
      w.key("passed").value(verdict.passed);
      w.key("worst_violation").value(verdict.worst_violation);
      w.key("m_max").value(opts.m_max);
      w.key("trials").value(opts.trials);
      w.key("tol").value(opts.tol);
      w.key("status").value("optimal");
      w.key("primal_value").value(report.primal_value);
      if (!verdict.passed && verdict.witness_beta) {
        w.key("witness_beta").begin_array();
        const auto bw = verdict.witness_beta->effective_weights();
        for (std::size_t s = 0; s < verdict.witness_beta->points.size(); ++s) {
          w.begin_object();
          w.key("index").begin_array();
          for (std::size_t i : verdict.witness_beta->points[s]) w.value(i);
          w.end_array();
          w.key("weight").value(bw[s]);
          w.end_object();
        }
        w.end_array();
        w.key("witness_alpha");
        emit_sparse_coupling(w, *verdict.witness);
      }
      break;
    }
    case CheckKind::marginal_compat: {
      const MarginalCompatibilityReport rep =
          check_marginal_compatibility(p.constraints, p.marginals);
      outcome = rep.all_compatible ? Outcome::ok : Outcome::failed;
      w.key("check").value("marginal-compat");
      w.key("passed").value(rep.all_compatible);
      w.key("generators").begin_array();
      for (const auto& e : rep.entries) {
        w.begin_object();
        w.key("generator").value(e.generator);
        w.key("applicable").value(e.applicable);
        if (e.applicable) {
          w.key("space").value(p.grid->factor(e.factor)->id());
          w.key("integral").value(e.integral);
          w.key("violated").value(e.violated);
        }
        w.end_object();
      }
      w.end_array();
      break;
    }
  }
  w.end_object();
  return w.take();
}

std::string run_lp(const std::string& lp_json, Outcome& outcome) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(lp_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("lp file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("objective") || !doc.contains("rows") ||
      !doc.contains("rhs"))
    throw parse_error("lp file: expected fields objective, rows, rhs");

  lp::Program prog;
  const auto& jobj = doc["objective"];
  const auto& jrows = doc["rows"];
  const auto& jrhs = doc["rhs"];
  if (!jobj.is_array() || !jrows.is_array() || !jrhs.is_array())
    throw parse_error("lp file: objective, rows and rhs must be arrays");
  for (const auto& v : jobj) {
    if (!v.is_number()) throw parse_error("lp file: objective entries must be numbers");
    prog.objective.push_back(v.get<double>());
  }
  prog.cols = prog.objective.size();
  prog.rows = jrows.size();
  for (const auto& row : jrows) {
    if (!row.is_array() || row.size() != prog.cols)
      throw parse_error("lp file: each row must have one entry per objective column");
    for (const auto& v : row) {
      if (!v.is_number()) throw parse_error("lp file: row entries must be numbers");
      prog.matrix.push_back(v.get<double>());
    }
  }
  for (const auto& v : jrhs) {
    if (!v.is_number()) throw parse_error("lp file: rhs entries must be numbers");
    prog.rhs.push_back(v.get<double>());
  }
  if (prog.rhs.size() != prog.rows)
    throw parse_error("lp file: rhs length must match the number of rows");

  lp::Solution sol;
  try {
    sol = lp::solve(prog);
  } catch (const validation_error& e) {
    throw parse_error(std::string("lp file: ") + e.what());
  }
  outcome = outcome_of(sol.status);

  JsonWriter w;
  w.begin_object();
  w.key("status").value(lp::to_string(sol.status));
  if (sol.status == lp::Status::optimal) {
    w.key("objective_value").value(sol.objective_value);
    w.key("primal").begin_array();
    for (double v : sol.primal) w.value(v);
    w.end_array();
    w.key("dual").begin_array();
    for (double v : sol.dual) w.value(v);
    w.end_array();
  } else if (sol.status == lp::Status::infeasible) {
    w.key("certificate").begin_array();
    for (double v : sol.certificate) w.value(v);
    w.end_array();
  }
  w.end_object();
  return w.take();
}

}  // namespace lcot
