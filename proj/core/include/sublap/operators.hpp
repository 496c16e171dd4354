#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "sublap/frames.hpp"
#include "sublap/grid.hpp"

namespace sublap {

/// Discrete horizontal gradient X = (X_1..X_m) of one frame on one grid,
/// with frame coefficients cached at every lattice node.
///
/// X_i is discretized with forward differences and zero extension outside
/// the interior, (X_i u)(x) = Σ_k b_ik(x) (u(x + h_k e_k) − u(x)) / h_k,
/// evaluated at every lattice node so the boundary-closure edges enter the
/// energy. The adjoint is the exact matrix transpose with respect to the
/// cell-volume-weighted inner product (the uniform volume cancels), and the
/// composition adjoint(gradient(u)) for the Euclidean frame is exactly the
/// standard (2n+1)-point negative Dirichlet Laplacian.
class FrameOperator {
 public:
  FrameOperator(const VectorFieldFrame& frame, GridPtr grid);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t m() const { return m_; }
  std::size_t n() const { return grid_->dim(); }
  const std::string& frame_label() const { return label_; }

  HField gradient(const ScalarField& u) const;
  ScalarField adjoint(const HField& v) const;

  /// Σ X_i^*(w X_i u) with the degenerate-weight rule w = (|Xu|² + ε²)^((p−2)/2);
  /// ε = 1e-10 · max|Xu| for p < 2 and ε = 0 for p ≥ 2.
  ScalarField p_laplacian(const ScalarField& u, double p) const;

  /// The symmetric positive-definite matrix of u ↦ adjoint(gradient(u));
  /// identical entries to p_laplacian at p = 2.
  Eigen::SparseMatrix<double> assemble_p2_matrix() const;

  /// Cached coefficient b_ik at a lattice node (flat index).
  double coeff(std::size_t i, std::size_t k, std::size_t flat) const {
    return coeff_[(i * n() + k) * nc_ + flat];
  }

 private:
  GridPtr grid_;
  std::size_t m_ = 0;
  std::size_t nc_ = 0;  // lattice nodes
  std::size_t ni_ = 0;  // interior nodes
  std::string label_;
  std::vector<double> coeff_;          // [(i*n + k)*nc + flat]
  std::vector<std::int64_t> fwd_int_;  // [k*nc + flat] -> interior of flat+e_k
  std::vector<std::int64_t> self_int_;   // [flat] -> interior index or -1
  std::vector<std::int64_t> bwd_flat_;   // [k*ni + node] -> flat of node-e_k
  std::vector<std::size_t> int_flat_;    // [node] -> flat
  std::vector<double> inv_h_;
};

// Field-level reductions; all integrals are node sums times the cell volume.

double p_energy(const HField& v, double p);
double lp_norm(const ScalarField& u, double p);
double rayleigh_quotient(const FrameOperator& op, const ScalarField& u,
                         double p);

/// Cell-volume-weighted inner product and norm on scalar fields.
double vol_dot(const ScalarField& a, const ScalarField& b);
double vol_norm(const ScalarField& a);

// Free-function aliases for the cached-operator methods.
inline HField horizontal_gradient(const FrameOperator& op,
                                  const ScalarField& u) {
  return op.gradient(u);
}
inline ScalarField adjoint_apply(const FrameOperator& op, const HField& v) {
  return op.adjoint(v);
}
inline ScalarField p_laplacian_apply(const FrameOperator& op,
                                     const ScalarField& u, double p) {
  return op.p_laplacian(u, p);
}

}  // namespace sublap
