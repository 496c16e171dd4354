#include "sublap/eigensolve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sublap/errors.hpp"

namespace sublap {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Cg = Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                                    Eigen::IncompleteCholesky<double>>;

ScalarField bump_field(const GridPtr& grid) {
  const auto& bounds = grid->bounds();
  return ScalarField::from_function(grid, [&](std::span<const double> x) {
    double v = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k)
      v *= (x[k] - bounds[k].first) * (bounds[k].second - x[k]);
    return v;
  });
}

ScalarField random_positive_field(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.1, 1.1);
  ScalarField f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = dist(rng);
  return f;
}

void normalize_p(ScalarField& u, double p) {
  const double norm = lp_norm(u, p);
  if (norm == 0.0)
    throw PreconditionError("cannot normalize the zero field");
  for (double& v : u.values()) v /= norm;
}

/// Flip so the nodal mean is nonnegative and clamp roundoff-scale negative
/// values to zero; genuine sign structure is left untouched.
void sign_normalize(ScalarField& u, bool clamp_tiny) {
  double mean = 0.0;
  for (const double v : u.values()) mean += v;
  if (mean < 0.0)
    for (double& v : u.values()) v = -v;
  if (clamp_tiny) {
    double vmax = 0.0;
    for (const double v : u.values()) vmax = std::max(vmax, std::abs(v));
    const double floor = 1e-12 * vmax;
    for (double& v : u.values())
      if (v < 0.0 && v > -floor) v = 0.0;
  }
}

/// |u|^{p-2} u, the right-hand-side weight of the eigenvalue equation.
ScalarField power_weight(const ScalarField& u, double p) {
  ScalarField w(u.grid_ptr());
  if (p == 2.0) {
    w.values() = u.values();
    return w;
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::abs(u[i]);
    w[i] = a > 0.0 ? std::copysign(std::pow(a, p - 1.0), u[i]) : 0.0;
  }
  return w;
}

EigenResult finalize(const FrameOperator& op, ScalarField u, double p,
                     int iterations) {
  sign_normalize(u, /*clamp_tiny=*/true);
  normalize_p(u, p);
  EigenResult res;
  res.p = p;
  res.u1 = std::move(u);
  res.lambda1 = rayleigh_quotient(op, res.u1, p);
  res.residual = residual_norm(op, res.u1, res.lambda1, p);
  res.iterations = iterations;
  res.poincare_constant = 1.0 / res.lambda1;
  return res;
}

ScalarField make_init(const FrameOperator& op, const SolverConfig& cfg,
                      int attempt);

EigenResult solve_p2_impl(const FrameOperator& op, const SolverConfig& cfg,
                          const ScalarField* deflate, double deflate_floor,
                          int* iterations_out, ScalarField* raw_out) {
  const SpMat a = op.assemble_p2_matrix();
  const auto n = a.rows();

  Cg cg;
  cg.setTolerance(1e-12);
  cg.setMaxIterations(std::max<Eigen::Index>(2000, 4 * n));
  cg.compute(a);
  if (cg.info() != Eigen::Success)
    throw SolverError("inner solver setup failed", {}, 0.0);

  Eigen::VectorXd dir;
  if (deflate) {
    dir = Eigen::Map<const Eigen::VectorXd>(deflate->values().data(), n);
    dir.normalize();
  }

  SolverConfig init_cfg = cfg;
  if (init_cfg.init == SolverConfig::Init::linear_eigvec)
    init_cfg.init = SolverConfig::Init::positive_bump;
  ScalarField u0 = make_init(op, init_cfg, deflate ? 1 : 0);
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(u0.values().data(), n);
  if (deflate) v -= dir * dir.dot(v);
  if (v.norm() == 0.0) throw SolverError("degenerate start vector", {}, 0.0);
  v.normalize();

  std::vector<double> traj;
  double lambda = v.dot(a * v);
  double guess_scale = lambda > 0.0 ? 1.0 / lambda : 1.0;
  Eigen::VectorXd w = v * guess_scale;
  double res = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= cfg.max_iter; ++it) {
    w = cg.solveWithGuess(v, w);
    if (cg.info() != Eigen::Success)
      throw SolverError("inner conjugate-gradient solve did not converge",
                        traj, cg.error());
    if (deflate) w -= dir * dir.dot(w);
    const double wn = w.norm();
    if (!(wn > 0.0) || !std::isfinite(wn))
      throw SolverError("inverse iteration produced a degenerate vector",
                        traj, res);
    v = w / wn;
    const double lambda_new = v.dot(a * v);
    res = (a * v - lambda_new * v).norm();
    const double rel = std::abs(lambda_new - lambda) /
                       std::max(std::abs(lambda_new), 1e-300);
    lambda = lambda_new;
    traj.push_back(lambda);
    if (rel < cfg.tol_rel && res < cfg.tol_res &&
        (!deflate || lambda > deflate_floor)) {
      if (iterations_out) *iterations_out = it;
      if (raw_out) {
        *raw_out = ScalarField(op.grid_ptr());
        Eigen::Map<Eigen::VectorXd>(raw_out->values().data(), n) = v;
      }
      ScalarField uf(op.grid_ptr());
      Eigen::Map<Eigen::VectorXd>(uf.values().data(), n) = v;
      return finalize(op, std::move(uf), 2.0, it);
    }
  }
  throw SolverError("inverse power iteration did not converge in " +
                        std::to_string(cfg.max_iter) + " iterations",
                    traj, res);
}

ScalarField make_init(const FrameOperator& op, const SolverConfig& cfg,
                      int attempt) {
  // Attempt 0 honors cfg.init; restarts (n_inits > 1) are random draws.
  if (attempt > 0) return random_positive_field(op.grid_ptr(), cfg.seed + attempt);
  switch (cfg.init) {
    case SolverConfig::Init::positive_bump:
      return bump_field(op.grid_ptr());
    case SolverConfig::Init::random:
      return random_positive_field(op.grid_ptr(), cfg.seed);
    case SolverConfig::Init::linear_eigvec: {
      SolverConfig lin = cfg;
      lin.p = 2.0;
      lin.init = SolverConfig::Init::positive_bump;
      return solve_p2(op, lin).u1;
    }
  }
  throw PreconditionError("unknown initializer");
}

EigenResult solve_p_single(const FrameOperator& op, const SolverConfig& cfg,
                           int attempt, const ScalarField* start = nullptr) {
  const double p = cfg.p;
  ScalarField u = start ? *start : make_init(op, cfg, attempt);
  normalize_p(u, p);

  double lambda = rayleigh_quotient(op, u, p);
  std::vector<double> traj{lambda};

  // The Rayleigh-decrease stopping statistic is the maximum over a short
  // window of accepted steps, so one unusually small backtracked step
  // cannot fire the test early.
  constexpr std::size_t kDecreaseWindow = 20;
  std::vector<double> recent_decreases;
  auto window_decrease = [&] {
    if (recent_decreases.size() < kDecreaseWindow)
      return std::numeric_limits<double>::infinity();
    return *std::max_element(recent_decreases.end() - kDecreaseWindow,
                             recent_decreases.end());
  };

  ScalarField u_prev, grad_prev;
  double alpha = cfg.step_init;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    ScalarField grad = op.p_laplacian(u, p);
    {
      const ScalarField w = power_weight(u, p);
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] -= lambda * w[i];
    }
    const double res = vol_norm(grad);
    if (!std::isfinite(res))
      throw SolverError("non-finite residual", traj, res);
    if (window_decrease() < cfg.tol_rel && res < cfg.tol_res)
      return finalize(op, std::move(u), p, it - 1);

    if (it > 1) {
      // Barzilai–Borwein trial step from the last accepted move.
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double s = u[i] - u_prev[i];
        ss += s * s;
        sy += s * (grad[i] - grad_prev[i]);
      }
      alpha = (std::isfinite(sy) && sy > 0.0) ? ss / sy : cfg.step_init;
      alpha = std::clamp(alpha, 1e-12, 1e8);
    }

    bool accepted = false;
    ScalarField trial(op.grid_ptr());
    double lambda_trial = 0.0;
    for (int bt = 0; bt < 80; ++bt) {
      for (std::size_t i = 0; i < u.size(); ++i)
        trial[i] = u[i] - alpha * grad[i];
      const double tn = lp_norm(trial, p);
      if (tn > 0.0 && std::isfinite(tn)) {
        for (double& v : trial.values()) v /= tn;
        lambda_trial = rayleigh_quotient(op, trial, p);
        if (!std::isfinite(lambda_trial))
          throw SolverError("divergent p-energy in line search", traj, res);
        if (lambda_trial <= lambda - cfg.step_c * alpha * res * res) {
          accepted = true;
          break;
        }
      }
      alpha *= cfg.step_shrink;
    }
    if (!accepted) {
      // No descent direction at machine-scale steps: either converged in
      // the residual sense or genuinely stuck.
      if (res < cfg.tol_res) return finalize(op, std::move(u), p, it - 1);
      throw SolverError("line search stalled before reaching tolerances",
                        traj, res);
    }

    u_prev = u;
    grad_prev = grad;
    recent_decreases.push_back((lambda - lambda_trial) /
                               std::max(lambda_trial, 1e-300));
    if (recent_decreases.size() > 2 * kDecreaseWindow)
      recent_decreases.erase(recent_decreases.begin(),
                             recent_decreases.end() - kDecreaseWindow);
    u = std::move(trial);
    lambda = lambda_trial;
    traj.push_back(lambda);
  }
  throw SolverError("projected gradient descent did not converge in " +
                        std::to_string(cfg.max_iter) + " iterations",
                    traj, std::numeric_limits<double>::quiet_NaN());
}

}  // namespace

void SolverConfig::validate() const {
  if (!(p > 1.0)) throw PreconditionError("solver: p must exceed 1");
  if (!(tol_rel > 0.0) || !(tol_res > 0.0))
    throw PreconditionError("solver: tolerances must be positive");
  if (max_iter < 1) throw PreconditionError("solver: max_iter must be >= 1");
  if (n_inits < 1) throw PreconditionError("solver: n_inits must be >= 1");
  if (!(step_init > 0.0) || !(step_shrink > 0.0) || step_shrink >= 1.0 ||
      !(step_c > 0.0))
    throw PreconditionError("solver: invalid line-search parameters");
}

SolverConfig::Init init_from_string(const std::string& name) {
  if (name == "positive_bump") return SolverConfig::Init::positive_bump;
  if (name == "random") return SolverConfig::Init::random;
  if (name == "linear_eigvec") return SolverConfig::Init::linear_eigvec;
  throw PreconditionError("unknown initializer '" + name + "'");
}

std::string to_string(SolverConfig::Init init) {
  switch (init) {
    case SolverConfig::Init::positive_bump:
      return "positive_bump";
    case SolverConfig::Init::random:
      return "random";
    case SolverConfig::Init::linear_eigvec:
      return "linear_eigvec";
  }
  return "?";
}

EigenResult solve_p2(const FrameOperator& op, const SolverConfig& cfg) {
  cfg.validate();
  if (cfg.p != 2.0)
    throw PreconditionError("solve_p2 requires p = 2");
  return solve_p2_impl(op, cfg, nullptr, 0.0, nullptr, nullptr);
}

EigenResult solve_p(const FrameOperator& op, const SolverConfig& cfg) {
  cfg.validate();
  EigenResult best;
  bool have = false;
  for (int attempt = 0; attempt < cfg.n_inits; ++attempt) {
    EigenResult r = solve_p_single(op, cfg, attempt);
    if (!have || r.lambda1 < best.lambda1) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

EigenResult solve_p(const FrameOperator& op, const SolverConfig& cfg,
                    const ScalarField& start) {
  cfg.validate();
  return solve_p_single(op, cfg, 0, &start);
}

double residual_norm(const FrameOperator& op, const ScalarField& u,
                     double lambda, double p) {
  ScalarField r = op.p_laplacian(u, p);
  const ScalarField w = power_weight(u, p);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lambda * w[i];
  return vol_norm(r);
}

double p_star(double p, int q) {
  if (!(p > 1.0)) throw PreconditionError("p_star: p must exceed 1");
  if (q < 1) throw PreconditionError("p_star: Q must be >= 1");
  if (p < static_cast<double>(q)) return static_cast<double>(q) * p / (q - p);
  return 2.0 * p;
}

SecondModeResult second_mode_p2(const FrameOperator& op,
                                const SolverConfig& cfg,
                                const EigenResult& first) {
  cfg.validate();
  if (cfg.p != 2.0)
    throw PreconditionError("second_mode_p2 requires p = 2");
  if (first.u1.size() != op.grid().interior_count())
    throw PreconditionError("second_mode_p2: first eigenpair grid mismatch");

  int iterations = 0;
  ScalarField raw;
  EigenResult r = solve_p2_impl(op, cfg, &first.u1,
                                first.lambda1 * (1.0 + 1e-12), &iterations,
                                &raw);
  // finalize() clamps tiny negatives, which is wrong for a sign-changing
  // mode; rebuild from the raw deflated vector instead.
  ScalarField u2 = std::move(raw);
  {
    double mean = 0.0;
    for (const double v : u2.values()) mean += v;
    if (mean < 0.0)
      for (double& v : u2.values()) v = -v;
  }
  const double norm = lp_norm(u2, 2.0);
  for (double& v : u2.values()) v /= norm;

  SecondModeResult out;
  out.lambda2 = rayleigh_quotient(op, u2, 2.0);
  out.residual = residual_norm(op, u2, out.lambda2, 2.0);
  out.iterations = iterations;
  out.u2 = std::move(u2);
  if (!(out.lambda2 > first.lambda1))
    throw SolverError("deflated mode did not separate from lambda1",
                      {first.lambda1, out.lambda2}, out.residual);
  return out;
}

}  // namespace sublap
