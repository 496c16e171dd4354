#pragma once

#include <cstdint>
#include <string>

#include "sublap/operators.hpp"

namespace sublap {

struct SolverConfig {
  enum class Init { positive_bump, random, linear_eigvec };

  double p = 2.0;
  double tol_rel = 1e-10;  // relative Rayleigh-decrease stopping threshold
  double tol_res = 1e-6;   // weak-form residual threshold
  int max_iter = 10000;
  std::uint64_t seed = 1;
  int n_inits = 1;
  Init init = Init::positive_bump;

  // backtracking line search
  double step_init = 1.0;
  double step_shrink = 0.5;
  double step_c = 1e-4;  // sufficient-decrease constant

  void validate() const;
};

SolverConfig::Init init_from_string(const std::string& name);
std::string to_string(SolverConfig::Init init);

/// First eigenpair: u1 is L^p-normalized and sign-normalized nonnegative,
/// lambda1 equals the Rayleigh quotient of u1, and poincare_constant is the
/// sharp Poincaré–Friedrichs constant 1/lambda1.
struct EigenResult {
  double p = 2.0;
  double lambda1 = 0.0;
  ScalarField u1;
  double residual = 0.0;
  int iterations = 0;
  double poincare_constant = 0.0;
};

struct SecondModeResult {
  double lambda2 = 0.0;
  ScalarField u2;
  double residual = 0.0;
  int iterations = 0;
};

/// Linear fast path (p = 2): assembles the symmetric positive-definite
/// matrix of the discrete operator and runs inverse power iteration (shift
/// 0) with a preconditioned conjugate-gradient inner solve.
EigenResult solve_p2(const FrameOperator& op, const SolverConfig& cfg);

/// Rayleigh-quotient minimization for any p > 1: projected gradient descent
/// on the p-energy over the constraint ||u||_p = 1, with a Barzilai–Borwein
/// trial step and Armijo backtracking enforcing strict Rayleigh decrease.
EigenResult solve_p(const FrameOperator& op, const SolverConfig& cfg);

/// Same, from an explicit start field (normalized internally, so its scale
/// cannot matter).
EigenResult solve_p(const FrameOperator& op, const SolverConfig& cfg,
                    const ScalarField& start);

/// Cell-volume-weighted norm of p_laplacian(u, p) − lambda |u|^{p−2} u.
double residual_norm(const FrameOperator& op, const ScalarField& u,
                     double lambda, double p);

/// Sobolev exponent p* driving the eigenvalue lower bound: Qp/(Q−p) for
/// 1 < p < Q, and 2p for p ≥ Q.
double p_star(double p, int q);

/// Smallest eigenpair of the p = 2 operator restricted to the orthogonal
/// complement of the first eigenvector (deflated inverse iteration);
/// lambda2 > lambda1 strictly.
SecondModeResult second_mode_p2(const FrameOperator& op,
                                const SolverConfig& cfg,
                                const EigenResult& first);

}  // namespace sublap
