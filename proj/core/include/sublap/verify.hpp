#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>

#include "sublap/eigensolve.hpp"
#include "sublap/metric.hpp"

namespace sublap {

/// Non-converged solver runs make a check inconclusive, which is distinct
/// from a theorem violation.
enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

struct CheckReport {
  std::string name;
  Verdict verdict = Verdict::fail;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string details;

  bool passed() const { return verdict == Verdict::pass; }
};

/// Samples the convexity inequalities on random pairs in R^m: for p >= 2,
/// |w2|^p >= |w1|^p + p|w1|^{p-2} w1·(w2−w1) + C|w2−w1|^p, and the
/// 1 < p < 2 variant with slack C|w2−w1|²/(|w1|+|w2|)^{2−p}. Reports the
/// empirical infimum Ĉ of the admissible constant and revalidates the
/// inequality with C = Ĉ/2 on a fresh sample set.
CheckReport convexity_check(double p, int n_samples, std::uint64_t seed,
                            int m_dim);

/// First eigenfunction strictly positive on the interior.
CheckReport positivity_check(const EigenResult& res);

/// k solve_p runs from independent random positive starts must agree: max
/// pairwise L^p distance < 1e-3 and relative lambda spread < 1e-6.
CheckReport simplicity_check(const FrameOperator& op, const SolverConfig& cfg,
                             int k);

/// statistic = (min u)(max u); "changes sign" iff negative. The caller
/// supplies the expected verdict (first mode: no; p = 2 second mode: yes).
CheckReport sign_change_check(const ScalarField& u, bool expect_sign_change);

/// Harnack quotient max/min of u1 over the metric ball B(source, r);
/// requires the 3r ball to stay strictly inside the interior.
CheckReport harnack_check(const ScalarField& u1, const DistanceField& df,
                          double r);

/// Hölder statistic max |u(x)−u(y)| / d_X(x,y)^alpha over sampled source
/// nodes and all reachable targets.
CheckReport holder_check(const ScalarField& u,
                         std::span<const DistanceField> dfs, double alpha);

/// Poincaré inequality with constant 1/lambda1 on random admissible fields,
/// plus sharpness (equality for u1 within 1e-8).
CheckReport poincare_check(const FrameOperator& op, const EigenResult& res,
                           int n_fields, std::uint64_t seed);

/// Lattice-property statistic: max relative discrepancy between the
/// p-energies of u and |u| over sign-changing sample fields (zero in the
/// continuum, O(h) discretely).
CheckReport lattice_check(const FrameOperator& op,
                          std::span<const ScalarField> samples, double p);

/// Domain monotonicity of lambda1 for nested interior masks on one lattice.
CheckReport monotonicity_check(const FrameOperator& inner,
                               const FrameOperator& outer,
                               const SolverConfig& cfg);

/// Refinement stability: fine-grid statistic at most max_ratio times the
/// coarse one. Used for the Harnack/Hölder boundedness proxies (ratio 1.5)
/// and the lattice decay (ratio 1).
CheckReport refinement_check(const std::string& name, double coarse_stat,
                             double fine_stat, double max_ratio);

/// Masked trigonometric sum with zero boundary values; the random
/// admissible family behind poincare_check.
ScalarField random_trig_field(const GridPtr& grid, std::mt19937_64& rng);

}  // namespace sublap
