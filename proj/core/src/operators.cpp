#include "sublap/operators.hpp"

#include <cmath>

#include "sublap/errors.hpp"

namespace sublap {

FrameOperator::FrameOperator(const VectorFieldFrame& frame, GridPtr grid)
    : grid_(std::move(grid)),
      m_(frame.m),
      nc_(grid_->node_count()),
      ni_(grid_->interior_count()),
      label_(frame.label) {
  if (frame.n != grid_->dim())
    throw DimensionError("frame dimension does not match grid dimension");
  const std::size_t n = grid_->dim();

  coeff_.resize(m_ * n * nc_);
  for (std::size_t flat = 0; flat < nc_; ++flat) {
    const auto x = grid_->point_of_flat(flat);
    const Eigen::MatrixXd b = frame.evaluate(x);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < n; ++k)
        coeff_[(i * n + k) * nc_ + flat] =
            b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }

  fwd_int_.assign(n * nc_, -1);
  self_int_.resize(nc_);
  for (std::size_t flat = 0; flat < nc_; ++flat) {
    self_int_[flat] = grid_->interior_index(flat);
    for (std::size_t k = 0; k < n; ++k) {
      const std::int64_t nb = grid_->flat_neighbor(flat, k, +1);
      if (nb >= 0)
        fwd_int_[k * nc_ + flat] =
            grid_->interior_index(static_cast<std::size_t>(nb));
    }
  }

  int_flat_.resize(ni_);
  bwd_flat_.resize(n * ni_);
  for (std::size_t node = 0; node < ni_; ++node) {
    const std::size_t flat = grid_->flat_of_interior(node);
    int_flat_[node] = flat;
    for (std::size_t k = 0; k < n; ++k) {
      // interior nodes are strictly inside the box, so the backward lattice
      // neighbor always exists
      bwd_flat_[k * ni_ + node] = grid_->flat_neighbor(flat, k, -1);
    }
  }

  inv_h_.resize(n);
  for (std::size_t k = 0; k < n; ++k) inv_h_[k] = 1.0 / grid_->spacing()[k];
}

HField FrameOperator::gradient(const ScalarField& u) const {
  if (&u.grid() != grid_.get())
    throw DimensionError("gradient: field lives on a different grid");
  const std::size_t n = grid_->dim();
  HField v(grid_, m_);
  for (std::size_t i = 0; i < m_; ++i) {
    auto out = v.component(i);
    for (std::size_t k = 0; k < n; ++k) {
      const double* b = coeff_.data() + (i * n + k) * nc_;
      const std::int64_t* fwd = fwd_int_.data() + k * nc_;
      const double ih = inv_h_[k];
      for (std::size_t flat = 0; flat < nc_; ++flat) {
        const double up =
            fwd[flat] >= 0 ? u[static_cast<std::size_t>(fwd[flat])] : 0.0;
        const double uc =
            self_int_[flat] >= 0 ? u[static_cast<std::size_t>(self_int_[flat])]
                                 : 0.0;
        if (up != 0.0 || uc != 0.0) out[flat] += b[flat] * (up - uc) * ih;
      }
    }
  }
  return v;
}

ScalarField FrameOperator::adjoint(const HField& v) const {
  if (&v.grid() != grid_.get() || v.m() != m_)
    throw DimensionError("adjoint: field shape mismatch");
  const std::size_t n = grid_->dim();
  ScalarField out(grid_);
  for (std::size_t i = 0; i < m_; ++i) {
    auto comp = v.component(i);
    for (std::size_t k = 0; k < n; ++k) {
      const double* b = coeff_.data() + (i * n + k) * nc_;
      const std::int64_t* bwd = bwd_flat_.data() + k * ni_;
      const double ih = inv_h_[k];
      for (std::size_t node = 0; node < ni_; ++node) {
        const std::size_t flat = int_flat_[node];
        const auto back = static_cast<std::size_t>(bwd[node]);
        out[node] += (b[back] * comp[back] - b[flat] * comp[flat]) * ih;
      }
    }
  }
  return out;
}

ScalarField FrameOperator::p_laplacian(const ScalarField& u, double p) const {
  if (!(p > 1.0)) throw PreconditionError("p_laplacian: p must exceed 1");
  HField g = gradient(u);
  if (p != 2.0) {
    double eps = 0.0;
    if (p < 2.0) {
      double gmax = 0.0;
      for (std::size_t flat = 0; flat < nc_; ++flat)
        gmax = std::max(gmax, g.magnitude(flat));
      eps = 1e-10 * gmax;
    }
    const double eps2 = eps * eps;
    std::vector<double> w(nc_);
    for (std::size_t flat = 0; flat < nc_; ++flat) {
      double s = eps2;
      for (std::size_t i = 0; i < m_; ++i) {
        const double c = g(i, flat);
        s += c * c;
      }
      w[flat] = s > 0.0 ? std::pow(s, 0.5 * (p - 2.0)) : 0.0;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      auto comp = g.component(i);
      for (std::size_t flat = 0; flat < nc_; ++flat) comp[flat] *= w[flat];
    }
  }
  return adjoint(g);
}

Eigen::SparseMatrix<double> FrameOperator::assemble_p2_matrix() const {
  const std::size_t n = grid_->dim();
  const auto rows = static_cast<Eigen::Index>(m_ * nc_);
  const auto cols = static_cast<Eigen::Index>(ni_);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m_ * ni_ * (n + 1));
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t flat = 0; flat < nc_; ++flat) {
      const auto row = static_cast<Eigen::Index>(i * nc_ + flat);
      double diag = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double c = coeff(i, k, flat) * inv_h_[k];
        diag -= c;
        const std::int64_t f = fwd_int_[k * nc_ + flat];
        if (f >= 0 && c != 0.0)
          trips.emplace_back(row, static_cast<Eigen::Index>(f), c);
      }
      const std::int64_t self = self_int_[flat];
      if (self >= 0 && diag != 0.0)
        trips.emplace_back(row, static_cast<Eigen::Index>(self), diag);
    }
  }
  Eigen::SparseMatrix<double> g(rows, cols);
  g.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseMatrix<double> a =
      Eigen::SparseMatrix<double>(g.transpose()) * g;
  a.makeCompressed();
  return a;
}

double p_energy(const HField& v, double p) {
  if (!(p > 1.0)) throw PreconditionError("p_energy: p must exceed 1");
  const std::size_t nodes = v.nodes();
  double sum = 0.0;
  if (p == 2.0) {
    for (const double c : v.values()) sum += c * c;
  } else {
    for (std::size_t node = 0; node < nodes; ++node) {
      double s = 0.0;
      for (std::size_t i = 0; i < v.m(); ++i) {
        const double c = v(i, node);
        s += c * c;
      }
      if (s > 0.0) sum += std::pow(s, 0.5 * p);
    }
  }
  return sum * v.grid().cell_volume();
}

double lp_norm(const ScalarField& u, double p) {
  if (!(p >= 1.0)) throw PreconditionError("lp_norm: p must be >= 1");
  double sum = 0.0;
  if (p == 2.0) {
    for (const double c : u.values()) sum += c * c;
    return std::sqrt(sum * u.grid().cell_volume());
  }
  for (const double c : u.values()) sum += std::pow(std::abs(c), p);
  return std::pow(sum * u.grid().cell_volume(), 1.0 / p);
}

double rayleigh_quotient(const FrameOperator& op, const ScalarField& u,
                         double p) {
  const double un = lp_norm(u, p);
  if (un == 0.0)
    throw PreconditionError(
        "rayleigh_quotient: u must be a nonzero admissible field");
  return p_energy(op.gradient(u), p) / std::pow(un, p);
}

double vol_dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid().cell_volume();
}

double vol_norm(const ScalarField& a) { return std::sqrt(vol_dot(a, a)); }

}  // namespace sublap
