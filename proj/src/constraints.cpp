#include "lcot/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcot {

ConstraintSet::ConstraintSet(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw validation_error("constraint set: null grid");
}

ConstraintSet::ConstraintSet(GridPtr grid, std::vector<ConstraintGenerator> generators)
    : ConstraintSet(std::move(grid)) {
  for (auto& g : generators) add(std::move(g));
}

void ConstraintSet::add(ConstraintGenerator gen) {
  if (gen.values.size() != grid_->cell_count())
    throw validation_error("generator '" + gen.name + "': shape does not match grid");
  for (double v : gen.values)
    if (!std::isfinite(v))
      throw validation_error("generator '" + gen.name + "': non-finite entry");
  for (const auto& g : generators_)
    if (g.name == gen.name)
      throw validation_error("duplicate generator name '" + gen.name + "'");
  generators_.push_back(std::move(gen));
}

std::vector<double> assemble_rows(const ConstraintSet& ws) {
  const std::size_t cells = ws.grid()->cell_count();
  std::vector<double> block(ws.size() * cells);
  for (std::size_t j = 0; j < ws.size(); ++j)
    std::copy(ws.generators()[j].values.begin(), ws.generators()[j].values.end(),
              block.begin() + j * cells);
  return block;
}

ConstraintSet reduce_generators(const ConstraintSet& ws, double tol) {
  if (tol <= 0.0) throw validation_error("reduce_generators: tol must be positive");
  const std::size_t cells = ws.grid()->cell_count();
  ConstraintSet out(ws.grid());
  // rows already kept, in eliminated form
  std::vector<std::vector<double>> kept_rows;
  std::vector<std::size_t> pivot_cols;
  for (const auto& gen : ws.generators()) {
    std::vector<double> row = gen.values;
    double scale = 0.0;
    for (double v : row) scale = std::max(scale, std::abs(v));
    for (std::size_t r = 0; r < kept_rows.size(); ++r) {
      const double f = row[pivot_cols[r]];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cells; ++c) row[c] -= f * kept_rows[r][c];
      row[pivot_cols[r]] = 0.0;
    }
    // column pivot: largest remaining entry
    std::size_t piv = 0;
    double piv_abs = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      if (std::abs(row[c]) > piv_abs) {
        piv_abs = std::abs(row[c]);
        piv = c;
      }
    }
    if (piv_abs <= tol * std::max(1.0, scale)) continue;  // dependent on kept rows
    const double inv = 1.0 / row[piv];
    for (double& v : row) v *= inv;
    row[piv] = 1.0;
    kept_rows.push_back(std::move(row));
    pivot_cols.push_back(piv);
    out.add(gen);
  }
  return out;
}

MarginalCompatibilityReport check_marginal_compatibility(
    const ConstraintSet& ws, std::span<const DiscreteMeasure> measures) {
  const ProductGrid& g = *ws.grid();
  if (measures.size() != g.factor_count())
    throw validation_error("marginal compatibility: need one measure per factor");
  for (std::size_t k = 0; k < measures.size(); ++k)
    if (measures[k].size() != g.factor_size(k))
      throw validation_error("marginal compatibility: measure size mismatch on factor " +
                             std::to_string(k));

  MarginalCompatibilityReport report;
  for (const auto& gen : ws.generators()) {
    MarginalCompatibilityEntry entry;
    entry.generator = gen.name;
    // A generator is single-coordinate in k when it varies by < 1e-12 along
    // every other axis, i.e. is constant on every slice with fixed k-index.
    for (std::size_t k = 0; k < g.factor_count() && !entry.applicable; ++k) {
      std::vector<double> lo(g.factor_size(k), std::numeric_limits<double>::infinity());
      std::vector<double> hi(g.factor_size(k), -std::numeric_limits<double>::infinity());
      for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
        const std::size_t i = g.coordinate_of(flat, k);
        lo[i] = std::min(lo[i], gen.values[flat]);
        hi[i] = std::max(hi[i], gen.values[flat]);
      }
      bool single = true;
      for (std::size_t i = 0; i < lo.size(); ++i)
        if (hi[i] - lo[i] >= 1e-12) {
          single = false;
          break;
        }
      if (single) {
        entry.applicable = true;
        entry.factor = k;
        double integral = 0.0;
        for (std::size_t i = 0; i < lo.size(); ++i)
          integral += lo[i] * measures[k].weight(i);
        entry.integral = integral;
        entry.violated = std::abs(integral) > 1e-9;
        if (entry.violated) report.all_compatible = false;
      }
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace lcot
