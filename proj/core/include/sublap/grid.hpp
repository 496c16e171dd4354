#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace sublap {

/// Rectangular domain description: a bounding box plus an optional interior
/// predicate (built-in: disk). The outermost node layer of the box is always
/// exterior, which realizes the homogeneous Dirichlet condition.
struct DomainSpec {
  enum class Type { box, disk };
  Type type = Type::box;
  std::vector<std::pair<double, double>> bounds;  // per-axis (low, high)
  std::vector<double> center;                     // disk only
  double radius = 0.0;                            // disk only

  std::size_t dim() const { return bounds.size(); }

  static DomainSpec box(std::vector<std::pair<double, double>> bounds);
  static DomainSpec disk(std::vector<std::pair<double, double>> bounds,
                         std::vector<double> center, double radius);
};

/// Rectangular lattice with an edge-connected interior mask. Node order is
/// lexicographic in the multi-index (axis 1 outermost), and interior nodes
/// carry compact indices in that order.
class Grid {
 public:
  using MaskPredicate = std::function<bool(std::span<const double>)>;

  Grid(DomainSpec spec, std::vector<int> resolution);
  /// Same lattice, custom interior predicate (node centers are tested; the
  /// boundary layer stays exterior regardless).
  Grid(DomainSpec spec, std::vector<int> resolution, const MaskPredicate& keep);

  std::size_t dim() const { return bounds_.size(); }
  const std::vector<int>& resolution() const { return resolution_; }
  const std::vector<std::pair<double, double>>& bounds() const { return bounds_; }
  std::span<const double> spacing() const { return spacing_; }
  double cell_volume() const { return cell_volume_; }

  std::size_t node_count() const { return node_count_; }
  std::size_t interior_count() const { return flat_of_interior_.size(); }
  /// |Ω| = interior node count times the cell volume.
  double measure() const;

  bool is_interior_flat(std::size_t flat) const {
    return interior_of_flat_[flat] >= 0;
  }
  std::int64_t interior_index(std::size_t flat) const {
    return interior_of_flat_[flat];
  }
  std::size_t flat_of_interior(std::size_t i) const {
    return flat_of_interior_[i];
  }

  std::vector<int> coords_of_flat(std::size_t flat) const;
  std::size_t flat_of_coords(std::span<const int> coords) const;
  std::vector<double> point_of_flat(std::size_t flat) const;
  std::vector<double> point_of_interior(std::size_t i) const;

  /// Interior index of the axis neighbor (dir = ±1), or -1 if the neighbor
  /// is exterior or off the lattice.
  std::int64_t interior_neighbor(std::size_t interior, std::size_t axis,
                                 int dir) const;

  /// Flat index of the axis neighbor of any lattice node, or -1 off lattice.
  std::int64_t flat_neighbor(std::size_t flat, std::size_t axis,
                             int dir) const;

  /// True when every axis neighbor of the node is interior.
  bool has_full_stencil(std::size_t interior) const;

  /// Interior index of the lattice node nearest to x, or -1 when that node
  /// is exterior.
  std::int64_t nearest_interior(std::span<const double> x) const;

 private:
  void build(const MaskPredicate* keep);

  std::vector<std::pair<double, double>> bounds_;
  DomainSpec::Type type_;
  std::vector<double> center_;
  double radius_ = 0.0;
  std::vector<int> resolution_;
  std::vector<double> spacing_;
  std::vector<std::size_t> stride_;
  std::size_t node_count_ = 0;
  double cell_volume_ = 1.0;
  std::vector<std::int64_t> interior_of_flat_;
  std::vector<std::size_t> flat_of_interior_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(DomainSpec spec, std::vector<int> resolution);
GridPtr build_grid(DomainSpec spec, std::vector<int> resolution,
                   const Grid::MaskPredicate& keep);

/// Nodal scalar values on the interior of a grid; exterior values are
/// implicitly zero (trace-zero discretization).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid)
      : grid_(std::move(grid)), values_(grid_->interior_count(), 0.0) {}
  ScalarField(GridPtr grid, std::vector<double> values);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Samples fn at interior node centers.
  static ScalarField from_function(
      GridPtr grid, const std::function<double(std::span<const double>)>& fn);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Horizontal-gradient values: m components per lattice node (flat index),
/// stored component-major. Values on the full lattice close the trace-zero
/// energy: a forward difference is nonzero only when one endpoint is
/// interior, and the rows anchored at boundary nodes carry the Dirichlet
/// edges into the domain.
class HField {
 public:
  HField() = default;
  HField(GridPtr grid, std::size_t m)
      : grid_(std::move(grid)), m_(m), values_(m * grid_->node_count(), 0.0) {}

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t m() const { return m_; }
  std::size_t nodes() const { return m_ ? values_.size() / m_ : 0; }

  double operator()(std::size_t comp, std::size_t node) const {
    return values_[comp * nodes_stride() + node];
  }
  double& operator()(std::size_t comp, std::size_t node) {
    return values_[comp * nodes_stride() + node];
  }
  std::span<const double> component(std::size_t comp) const {
    return {values_.data() + comp * nodes_stride(), nodes_stride()};
  }
  std::span<double> component(std::size_t comp) {
    return {values_.data() + comp * nodes_stride(), nodes_stride()};
  }

  /// Euclidean length of the m-vector at a node.
  double magnitude(std::size_t node) const;

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  std::size_t nodes_stride() const { return m_ ? values_.size() / m_ : 0; }

  GridPtr grid_;
  std::size_t m_ = 0;
  std::vector<double> values_;
};

}  // namespace sublap
