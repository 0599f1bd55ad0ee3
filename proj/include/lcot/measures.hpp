#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lcot/error.hpp"

namespace lcot {

/// A finite labeled point set. Points may optionally carry a real coordinate;
/// coordinate presence is uniform (all points have one or none do). Coordinates
/// are required by the martingale constraints, where every factor lives on R.
class DiscreteSpace {
 public:
  DiscreteSpace(std::string id, std::vector<std::string> labels);
  DiscreteSpace(std::string id, std::vector<std::string> labels,
                std::vector<double> coordinates);

  const std::string& id() const { return id_; }
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool has_coordinates() const { return !coordinates_.empty(); }
  double coordinate(std::size_t i) const;
  const std::vector<double>& coordinates() const { return coordinates_; }

 private:
  std::string id_;
  std::vector<std::string> labels_;
  std::vector<double> coordinates_;  // empty when absent
};

using SpacePtr = std::shared_ptr<const DiscreteSpace>;

SpacePtr make_space(std::string id, std::vector<std::string> labels);
SpacePtr make_space(std::string id, std::vector<std::string> labels,
                    std::vector<double> coordinates);
/// Space with labels "0","1",... and coordinates equal to the given values.
SpacePtr make_coordinate_space(std::string id, std::vector<double> coordinates);

/// Nonnegative weights on a DiscreteSpace summing to one. Construction fails
/// unless the input already sums to 1 within 1e-9; it is then renormalized so
/// the stored weights sum to 1 at machine precision. Silent renormalization of
/// arbitrary input is refused because it hides modeling errors.
class DiscreteMeasure {
 public:
  DiscreteMeasure(SpacePtr space, std::vector<double> weights);

  const SpacePtr& space() const { return space_; }
  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  /// Sum of coordinate * weight; requires coordinates.
  double mean() const;

 private:
  SpacePtr space_;
  std::vector<double> weights_;
};

/// Product of n factor spaces with a canonical row-major flat indexing:
/// factor 0 varies slowest, the last factor fastest. The flat order is part
/// of the public contract; file formats and test oracles rely on it.
class ProductGrid {
 public:
  explicit ProductGrid(std::vector<SpacePtr> factors);

  std::size_t factor_count() const { return factors_.size(); }
  const SpacePtr& factor(std::size_t k) const { return factors_.at(k); }
  const std::vector<SpacePtr>& factors() const { return factors_; }
  std::size_t factor_size(std::size_t k) const { return sizes_.at(k); }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t cell_count() const { return total_; }

  std::size_t flat_index(std::span<const std::size_t> multi) const;
  std::vector<std::size_t> multi_index(std::size_t flat) const;
  void multi_index(std::size_t flat, std::span<std::size_t> out) const;
  /// Index of factor k within a flat cell index, without decoding the rest.
  std::size_t coordinate_of(std::size_t flat, std::size_t k) const;

  /// Structural compatibility: same factor ids and sizes in the same order.
  bool compatible_with(const ProductGrid& other) const;

 private:
  std::vector<SpacePtr> factors_;
  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

using GridPtr = std::shared_ptr<const ProductGrid>;

GridPtr make_grid(std::vector<SpacePtr> factors);

/// Real-valued function on the product grid, stored dense in flat order.
class CostTensor {
 public:
  CostTensor(GridPtr grid, std::vector<double> values);

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(std::size_t flat) const { return values_[flat]; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Nonnegative mass on the product grid with total mass one (within 1e-9).
/// Entries in [-1e-9, 0) coming from solver round-off are clamped to zero;
/// anything more negative is rejected.
class Coupling {
 public:
  Coupling(GridPtr grid, std::vector<double> weights);

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t flat) const { return weights_[flat]; }
  double total_mass() const;

 private:
  GridPtr grid_;
  std::vector<double> weights_;
};

/// Sum of coupling weights over all indices but the k-th: the pushforward of
/// the coupling onto factor k.
DiscreteMeasure marginal(const Coupling& pi, std::size_t k);

/// Independent product of one measure per grid factor.
Coupling product_measure(GridPtr grid, std::span<const DiscreteMeasure> measures);

/// Weighted sum over the grid of tensor values against coupling weights.
double integrate(std::span<const double> values, const Coupling& pi);
double integrate(const CostTensor& tensor, const Coupling& pi);

/// Relabel the coupling by a bijection of each factor's points; factor_maps[k][i]
/// is the image of point i. Pure permutation of entries, mass preserved exactly.
Coupling pushforward(const Coupling& pi,
                     const std::vector<std::vector<std::size_t>>& factor_maps);

}  // namespace lcot
