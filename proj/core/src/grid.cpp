#include "sublap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "sublap/errors.hpp"

namespace sublap {

DomainSpec DomainSpec::box(std::vector<std::pair<double, double>> bounds) {
  DomainSpec s;
  s.type = Type::box;
  s.bounds = std::move(bounds);
  return s;
}

DomainSpec DomainSpec::disk(std::vector<std::pair<double, double>> bounds,
                            std::vector<double> center, double radius) {
  DomainSpec s;
  s.type = Type::disk;
  s.bounds = std::move(bounds);
  s.center = std::move(center);
  s.radius = radius;
  return s;
}

Grid::Grid(DomainSpec spec, std::vector<int> resolution)
    : Grid(std::move(spec), std::move(resolution), MaskPredicate()) {}

Grid::Grid(DomainSpec spec, std::vector<int> resolution,
           const MaskPredicate& keep)
    : bounds_(std::move(spec.bounds)),
      type_(spec.type),
      center_(std::move(spec.center)),
      radius_(spec.radius),
      resolution_(std::move(resolution)) {
  if (bounds_.empty()) throw PreconditionError("grid: empty bounds");
  if (resolution_.size() != bounds_.size())
    throw DimensionError("grid: resolution/bounds dimension mismatch");
  for (std::size_t k = 0; k < bounds_.size(); ++k) {
    if (!(bounds_[k].first < bounds_[k].second))
      throw PreconditionError("grid: bounds low >= high on axis " +
                              std::to_string(k + 1));
    if (resolution_[k] < 4)
      throw PreconditionError("grid: resolution must be >= 4 per axis");
  }
  if (type_ == DomainSpec::Type::disk) {
    if (center_.size() != bounds_.size())
      throw DimensionError("grid: disk center dimension mismatch");
    if (!(radius_ > 0.0)) throw PreconditionError("grid: disk radius <= 0");
  }
  build(keep ? &keep : nullptr);
}

void Grid::build(const MaskPredicate* keep) {
  const std::size_t dim = bounds_.size();
  spacing_.resize(dim);
  for (std::size_t k = 0; k < dim; ++k)
    spacing_[k] =
        (bounds_[k].second - bounds_[k].first) / (resolution_[k] - 1);
  cell_volume_ = std::accumulate(spacing_.begin(), spacing_.end(), 1.0,
                                 std::multiplies<>());

  stride_.assign(dim, 1);
  for (std::size_t k = dim; k-- > 1;)
    stride_[k - 1] = stride_[k] * static_cast<std::size_t>(resolution_[k]);
  node_count_ = stride_[0] * static_cast<std::size_t>(resolution_[0]);

  interior_of_flat_.assign(node_count_, -1);
  std::vector<int> coords(dim, 0);
  std::vector<double> x(dim);
  for (std::size_t flat = 0; flat < node_count_; ++flat) {
    bool boundary = false;
    for (std::size_t k = 0; k < dim; ++k) {
      if (coords[k] == 0 || coords[k] == resolution_[k] - 1) {
        boundary = true;
        break;
      }
    }
    if (!boundary) {
      for (std::size_t k = 0; k < dim; ++k)
        x[k] = bounds_[k].first + coords[k] * spacing_[k];
      bool inside = true;
      if (type_ == DomainSpec::Type::disk) {
        double r2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
          const double d = x[k] - center_[k];
          r2 += d * d;
        }
        inside = r2 < radius_ * radius_;
      }
      if (inside && keep && !(*keep)(x)) inside = false;
      if (inside) {
        interior_of_flat_[flat] =
            static_cast<std::int64_t>(flat_of_interior_.size());
        flat_of_interior_.push_back(flat);
      }
    }
    // advance the multi-index, last axis fastest
    for (std::size_t k = dim; k-- > 0;) {
      if (++coords[k] < resolution_[k]) break;
      coords[k] = 0;
    }
  }

  if (flat_of_interior_.empty())
    throw StructuralError("grid: empty interior");

  // Edge connectivity of the interior (the domain must be connected).
  std::vector<char> seen(flat_of_interior_.size(), 0);
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < dim; ++k) {
      for (int dir : {-1, +1}) {
        const std::int64_t nb = interior_neighbor(i, k, dir);
        if (nb >= 0 && !seen[static_cast<std::size_t>(nb)]) {
          seen[static_cast<std::size_t>(nb)] = 1;
          ++visited;
          queue.push_back(static_cast<std::size_t>(nb));
        }
      }
    }
  }
  if (visited != flat_of_interior_.size()) {
    std::ostringstream os;
    os << "grid: interior mask is disconnected (" << visited << " of "
       << flat_of_interior_.size() << " nodes reachable)";
    throw StructuralError(os.str());
  }
}

double Grid::measure() const {
  return static_cast<double>(interior_count()) * cell_volume_;
}

std::vector<int> Grid::coords_of_flat(std::size_t flat) const {
  std::vector<int> coords(dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    coords[k] = static_cast<int>(flat / stride_[k]);
    flat %= stride_[k];
  }
  return coords;
}

std::size_t Grid::flat_of_coords(std::span<const int> coords) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dim(); ++k)
    flat += static_cast<std::size_t>(coords[k]) * stride_[k];
  return flat;
}

std::vector<double> Grid::point_of_flat(std::size_t flat) const {
  const auto coords = coords_of_flat(flat);
  std::vector<double> x(dim());
  for (std::size_t k = 0; k < dim(); ++k)
    x[k] = bounds_[k].first + coords[k] * spacing_[k];
  return x;
}

std::vector<double> Grid::point_of_interior(std::size_t i) const {
  return point_of_flat(flat_of_interior_[i]);
}

std::int64_t Grid::interior_neighbor(std::size_t interior, std::size_t axis,
                                     int dir) const {
  const std::int64_t nflat =
      flat_neighbor(flat_of_interior_[interior], axis, dir);
  return nflat < 0 ? -1 : interior_of_flat_[static_cast<std::size_t>(nflat)];
}

std::int64_t Grid::flat_neighbor(std::size_t flat, std::size_t axis,
                                 int dir) const {
  const int c = static_cast<int>(flat / stride_[axis]) % resolution_[axis];
  const int nc = c + dir;
  if (nc < 0 || nc >= resolution_[axis]) return -1;
  return static_cast<std::int64_t>(dir > 0 ? flat + stride_[axis]
                                           : flat - stride_[axis]);
}

bool Grid::has_full_stencil(std::size_t interior) const {
  for (std::size_t k = 0; k < dim(); ++k)
    for (int dir : {-1, +1})
      if (interior_neighbor(interior, k, dir) < 0) return false;
  return true;
}

std::int64_t Grid::nearest_interior(std::span<const double> x) const {
  if (x.size() != dim())
    throw DimensionError("nearest_interior: point dimension mismatch");
  std::vector<int> coords(dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    const double t = (x[k] - bounds_[k].first) / spacing_[k];
    const int c = static_cast<int>(std::lround(t));
    coords[k] = std::clamp(c, 0, resolution_[k] - 1);
  }
  return interior_of_flat_[flat_of_coords(coords)];
}

namespace {

std::vector<int> broadcast(std::vector<int> resolution, std::size_t dim) {
  if (resolution.size() == 1 && dim > 1)
    resolution.assign(dim, resolution.front());
  return resolution;
}

}  // namespace

GridPtr build_grid(DomainSpec spec, std::vector<int> resolution) {
  resolution = broadcast(std::move(resolution), spec.bounds.size());
  return std::make_shared<Grid>(std::move(spec), std::move(resolution));
}

GridPtr build_grid(DomainSpec spec, std::vector<int> resolution,
                   const Grid::MaskPredicate& keep) {
  resolution = broadcast(std::move(resolution), spec.bounds.size());
  return std::make_shared<Grid>(std::move(spec), std::move(resolution), keep);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->interior_count())
    throw DimensionError("scalar field size does not match grid interior");
}

ScalarField ScalarField::from_function(
    GridPtr grid, const std::function<double(std::span<const double>)>& fn) {
  ScalarField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = grid->point_of_interior(i);
    f[i] = fn(x);
  }
  return f;
}

double HField::magnitude(std::size_t node) const {
  double s = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    const double v = (*this)(i, node);
    s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace sublap
