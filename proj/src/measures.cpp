#include "lcot/measures.hpp"

#include <cmath>
#include <numeric>
#include <unordered_set>

namespace lcot {

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw validation_error(std::string(what) + ": non-finite entry");
  }
}

}  // namespace

DiscreteSpace::DiscreteSpace(std::string id, std::vector<std::string> labels)
    : id_(std::move(id)), labels_(std::move(labels)) {
  if (labels_.empty()) throw validation_error("space '" + id_ + "': empty point set");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second)
      throw validation_error("space '" + id_ + "': duplicate point label '" + l + "'");
  }
}

DiscreteSpace::DiscreteSpace(std::string id, std::vector<std::string> labels,
                             std::vector<double> coordinates)
    : DiscreteSpace(std::move(id), std::move(labels)) {
  if (coordinates.size() != labels_.size())
    throw validation_error("space '" + id_ + "': coordinate count does not match point count");
  check_finite(coordinates, "space coordinates");
  coordinates_ = std::move(coordinates);
}

double DiscreteSpace::coordinate(std::size_t i) const {
  if (coordinates_.empty())
    throw validation_error("space '" + id_ + "' has no coordinates");
  return coordinates_.at(i);
}

SpacePtr make_space(std::string id, std::vector<std::string> labels) {
  return std::make_shared<DiscreteSpace>(std::move(id), std::move(labels));
}

SpacePtr make_space(std::string id, std::vector<std::string> labels,
                    std::vector<double> coordinates) {
  return std::make_shared<DiscreteSpace>(std::move(id), std::move(labels),
                                         std::move(coordinates));
}

SpacePtr make_coordinate_space(std::string id, std::vector<double> coordinates) {
  std::vector<std::string> labels;
  labels.reserve(coordinates.size());
  for (double c : coordinates) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", c);
    labels.emplace_back(buf);
  }
  return make_space(std::move(id), std::move(labels), std::move(coordinates));
}

DiscreteMeasure::DiscreteMeasure(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw validation_error("measure: null space");
  if (weights_.size() != space_->size())
    throw validation_error("measure on '" + space_->id() + "': weight count " +
                           std::to_string(weights_.size()) + " != point count " +
                           std::to_string(space_->size()));
  check_finite(weights_, "measure weights");
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0)
      throw validation_error("measure on '" + space_->id() + "': negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw validation_error("measure on '" + space_->id() + "': weights sum to " +
                           std::to_string(sum) + ", not 1");
  // skip the division when already normalized so that re-parsing serialized
  // weights reproduces them bit for bit
  if (std::abs(sum - 1.0) > 1e-14)
    for (double& w : weights_) w /= sum;
}

double DiscreteMeasure::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    m += weights_[i] * space_->coordinate(i);
  return m;
}

ProductGrid::ProductGrid(std::vector<SpacePtr> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw validation_error("grid: no factor spaces");
  sizes_.reserve(factors_.size());
  for (const auto& f : factors_) {
    if (!f) throw validation_error("grid: null factor space");
    sizes_.push_back(f->size());
    total_ *= f->size();
  }
  strides_.assign(factors_.size(), 1);
  for (std::size_t k = factors_.size(); k-- > 1;)
    strides_[k - 1] = strides_[k] * sizes_[k];
}

std::size_t ProductGrid::flat_index(std::span<const std::size_t> multi) const {
  if (multi.size() != sizes_.size())
    throw validation_error("grid: multi-index arity mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < multi.size(); ++k) {
    if (multi[k] >= sizes_[k]) throw validation_error("grid: multi-index out of range");
    flat += multi[k] * strides_[k];
  }
  return flat;
}

std::vector<std::size_t> ProductGrid::multi_index(std::size_t flat) const {
  std::vector<std::size_t> out(sizes_.size());
  multi_index(flat, out);
  return out;
}

void ProductGrid::multi_index(std::size_t flat, std::span<std::size_t> out) const {
  if (flat >= total_) throw validation_error("grid: flat index out of range");
  for (std::size_t k = 0; k < sizes_.size(); ++k) {
    out[k] = flat / strides_[k];
    flat %= strides_[k];
  }
}

std::size_t ProductGrid::coordinate_of(std::size_t flat, std::size_t k) const {
  return (flat / strides_.at(k)) % sizes_[k];
}

bool ProductGrid::compatible_with(const ProductGrid& other) const {
  if (factors_.size() != other.factors_.size()) return false;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (sizes_[k] != other.sizes_[k]) return false;
    if (factors_[k]->id() != other.factors_[k]->id()) return false;
  }
  return true;
}

GridPtr make_grid(std::vector<SpacePtr> factors) {
  return std::make_shared<ProductGrid>(std::move(factors));
}

CostTensor::CostTensor(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw validation_error("cost tensor: null grid");
  if (values_.size() != grid_->cell_count())
    throw validation_error("cost tensor: value count does not match grid size");
  check_finite(values_, "cost tensor");
}

Coupling::Coupling(GridPtr grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {
  if (!grid_) throw validation_error("coupling: null grid");
  if (weights_.size() != grid_->cell_count())
    throw validation_error("coupling: weight count does not match grid size");
  check_finite(weights_, "coupling weights");
  double mass = 0.0;
  for (double& w : weights_) {
    if (w < -1e-9) throw validation_error("coupling: negative weight");
    if (w < 0.0) w = 0.0;
    mass += w;
  }
  if (std::abs(mass - 1.0) > 1e-9)
    throw validation_error("coupling: total mass " + std::to_string(mass) + ", not 1");
}

double Coupling::total_mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

DiscreteMeasure marginal(const Coupling& pi, std::size_t k) {
  const ProductGrid& g = *pi.grid();
  if (k >= g.factor_count()) throw validation_error("marginal: factor index out of range");
  std::vector<double> w(g.factor_size(k), 0.0);
  for (std::size_t flat = 0; flat < g.cell_count(); ++flat)
    w[g.coordinate_of(flat, k)] += pi.weight(flat);
  return DiscreteMeasure(g.factor(k), std::move(w));
}

Coupling product_measure(GridPtr grid, std::span<const DiscreteMeasure> measures) {
  const ProductGrid& g = *grid;
  if (measures.size() != g.factor_count())
    throw validation_error("product measure: need one measure per grid factor");
  for (std::size_t k = 0; k < measures.size(); ++k) {
    if (measures[k].size() != g.factor_size(k))
      throw validation_error("product measure: measure size mismatch on factor " +
                             std::to_string(k));
  }
  std::vector<double> w(g.cell_count());
  for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
    double p = 1.0;
    for (std::size_t k = 0; k < measures.size(); ++k)
      p *= measures[k].weight(g.coordinate_of(flat, k));
    w[flat] = p;
  }
  return Coupling(std::move(grid), std::move(w));
}

double integrate(std::span<const double> values, const Coupling& pi) {
  if (values.size() != pi.weights().size())
    throw validation_error("integrate: tensor/coupling shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += values[i] * pi.weight(i);
  return acc;
}

double integrate(const CostTensor& tensor, const Coupling& pi) {
  if (!tensor.grid()->compatible_with(*pi.grid()))
    throw validation_error("integrate: tensor and coupling live on different grids");
  return integrate(std::span<const double>(tensor.values()), pi);
}

Coupling pushforward(const Coupling& pi,
                     const std::vector<std::vector<std::size_t>>& factor_maps) {
  const ProductGrid& g = *pi.grid();
  if (factor_maps.size() != g.factor_count())
    throw validation_error("pushforward: need one map per factor");
  for (std::size_t k = 0; k < factor_maps.size(); ++k) {
    const auto& m = factor_maps[k];
    if (m.size() != g.factor_size(k))
      throw validation_error("pushforward: map size mismatch on factor " + std::to_string(k));
    std::vector<char> hit(m.size(), 0);
    for (std::size_t v : m) {
      if (v >= m.size() || hit[v])
        throw validation_error("pushforward: factor map " + std::to_string(k) +
                               " is not a bijection");
      hit[v] = 1;
    }
  }
  std::vector<double> out(g.cell_count(), 0.0);
  std::vector<std::size_t> multi(g.factor_count());
  for (std::size_t flat = 0; flat < g.cell_count(); ++flat) {
    g.multi_index(flat, multi);
    for (std::size_t k = 0; k < multi.size(); ++k) multi[k] = factor_maps[k][multi[k]];
    out[g.flat_index(multi)] = pi.weight(flat);
  }
  return Coupling(pi.grid(), std::move(out));
}

}  // namespace lcot
