#include "sublap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sublap/errors.hpp"

namespace sublap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double vec_norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

CheckReport convexity_check(double p, int n_samples, std::uint64_t seed,
                            int m_dim) {
  if (!(p > 1.0)) throw PreconditionError("convexity_check: p must exceed 1");
  if (n_samples < 1)
    throw PreconditionError("convexity_check: n_samples must be >= 1");
  if (m_dim < 1) throw PreconditionError("convexity_check: m_dim must be >= 1");

  const bool branch_a = p >= 2.0;  // slack C|w2-w1|^p vs the 1<p<2 variant

  auto slack_and_denominator = [&](std::span<const double> w1,
                                   std::span<const double> w2,
                                   double& slack, double& denom) -> bool {
    const double n1 = vec_norm(w1);
    const double n2 = vec_norm(w2);
    std::vector<double> delta(w1.size());
    for (std::size_t i = 0; i < w1.size(); ++i) delta[i] = w2[i] - w1[i];
    const double nd = vec_norm(delta);
    // The slack term cancels to roundoff when w2 ~ w1; such pairs cannot
    // inform the empirical infimum and are skipped.
    if (nd < 0.05 * (n1 + n2) || nd == 0.0) return false;
    double dot = 0.0;
    for (std::size_t i = 0; i < w1.size(); ++i) dot += w1[i] * delta[i];
    const double mid = n1 > 0.0 ? p * std::pow(n1, p - 2.0) * dot : 0.0;
    slack = std::pow(n2, p) - std::pow(n1, p) - mid;
    denom = branch_a ? std::pow(nd, p)
                     : nd * nd / std::pow(n1 + n2, 2.0 - p);
    return denom > 0.0;
  };

  auto sample_pass = [&](std::uint64_t s, double* c_min, double c_required,
                         long* used, long* skipped) -> bool {
    std::mt19937_64 rng(s);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> w1(static_cast<std::size_t>(m_dim));
    std::vector<double> w2(static_cast<std::size_t>(m_dim));
    bool ok = true;
    for (int j = 0; j < n_samples; ++j) {
      for (auto& c : w2) c = normal(rng);
      if (j % 8 == 7) {
        std::fill(w1.begin(), w1.end(), 0.0);  // exercises the w1 = 0 family
      } else {
        for (auto& c : w1) c = normal(rng);
      }
      double slack = 0.0;
      double denom = 0.0;
      if (!slack_and_denominator(w1, w2, slack, denom)) {
        if (skipped) ++(*skipped);
        continue;
      }
      if (used) ++(*used);
      const double c = slack / denom;
      if (c_min) *c_min = std::min(*c_min, c);
      if (c_required > 0.0 && slack < c_required * denom) ok = false;
    }
    return ok;
  };

  double c_hat = kInf;
  long used = 0;
  long skipped = 0;
  sample_pass(seed, &c_hat, 0.0, &used, &skipped);

  CheckReport rep;
  rep.name = "convexity_p" + fmt(p) + "_m" + std::to_string(m_dim);
  rep.threshold = 0.0;
  if (used == 0 || !std::isfinite(c_hat)) {
    rep.verdict = Verdict::inconclusive;
    rep.statistic = 0.0;
    rep.details = "no usable samples";
    return rep;
  }
  rep.statistic = c_hat;

  const bool fresh_ok =
      sample_pass(seed ^ 0x9e3779b97f4a7c15ULL, nullptr, c_hat / 2.0, nullptr,
                  nullptr);
  rep.verdict = (c_hat > 0.0 && fresh_ok) ? Verdict::pass : Verdict::fail;
  std::ostringstream os;
  os << "c_hat=" << fmt(c_hat) << " used=" << used << " skipped=" << skipped
     << " fresh_revalidation=" << (fresh_ok ? "ok" : "violated");
  rep.details = os.str();
  return rep;
}

CheckReport positivity_check(const EigenResult& res) {
  CheckReport rep;
  rep.name = "positivity";
  rep.threshold = 0.0;
  double vmin = kInf;
  for (const double v : res.u1.values()) vmin = std::min(vmin, v);
  rep.statistic = vmin;
  rep.verdict = vmin > 0.0 ? Verdict::pass : Verdict::fail;
  rep.details = "min_u1=" + fmt(vmin);
  return rep;
}

CheckReport simplicity_check(const FrameOperator& op, const SolverConfig& cfg,
                             int k) {
  if (k < 2) throw PreconditionError("simplicity_check: k must be >= 2");
  CheckReport rep;
  rep.name = "simplicity";
  rep.threshold = 1.0;

  std::vector<EigenResult> runs;
  runs.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    SolverConfig run_cfg = cfg;
    run_cfg.init = SolverConfig::Init::random;
    run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(j);
    run_cfg.n_inits = 1;
    try {
      runs.push_back(solve_p(op, run_cfg));
    } catch (const SolverError& e) {
      rep.verdict = Verdict::inconclusive;
      rep.statistic = kInf;
      rep.details = std::string("run ") + std::to_string(j) +
                    " did not converge: " + e.what();
      return rep;
    }
  }

  double max_dist = 0.0;
  double lam_min = kInf;
  double lam_max = -kInf;
  for (const auto& r : runs) {
    lam_min = std::min(lam_min, r.lambda1);
    lam_max = std::max(lam_max, r.lambda1);
  }
  for (std::size_t a = 0; a < runs.size(); ++a) {
    for (std::size_t b = a + 1; b < runs.size(); ++b) {
      ScalarField diff = runs[a].u1;
      for (std::size_t i = 0; i < diff.size(); ++i)
        diff[i] -= runs[b].u1[i];
      max_dist = std::max(max_dist, lp_norm(diff, cfg.p));
    }
  }
  const double spread = (lam_max - lam_min) / lam_min;
  rep.statistic = std::max(max_dist / 1e-3, spread / 1e-6);
  rep.verdict = rep.statistic < 1.0 ? Verdict::pass : Verdict::fail;
  rep.details = "max_lp_distance=" + fmt(max_dist) +
                " lambda_spread=" + fmt(spread) + " runs=" + std::to_string(k);
  return rep;
}

CheckReport sign_change_check(const ScalarField& u, bool expect_sign_change) {
  double vmin = kInf;
  double vmax = -kInf;
  for (const double v : u.values()) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (vmin == kInf || (vmin == 0.0 && vmax == 0.0))
    throw PreconditionError("sign_change_check: u must be nonzero");
  CheckReport rep;
  rep.name = expect_sign_change ? "sign_change_present" : "sign_change_absent";
  rep.threshold = 0.0;
  rep.statistic = vmin * vmax;
  const bool changes = rep.statistic < 0.0;
  rep.verdict = changes == expect_sign_change ? Verdict::pass : Verdict::fail;
  rep.details = "min=" + fmt(vmin) + " max=" + fmt(vmax) +
                (changes ? " (changes sign)" : " (one sign)");
  return rep;
}

CheckReport harnack_check(const ScalarField& u1, const DistanceField& df,
                          double r) {
  if (!(r > 0.0)) throw PreconditionError("harnack_check: r must be positive");
  const Grid& grid = u1.grid();
  for (const std::size_t node : metric_ball(df, 3.0 * r)) {
    if (!grid.has_full_stencil(node))
      throw PreconditionError(
          "harnack_check: the 3r ball touches the domain boundary");
  }
  const auto ball = metric_ball(df, r);
  double vmin = kInf;
  double vmax = -kInf;
  for (const std::size_t node : ball) {
    vmin = std::min(vmin, u1[node]);
    vmax = std::max(vmax, u1[node]);
  }
  CheckReport rep;
  rep.name = "harnack";
  rep.threshold = kInf;
  rep.statistic = vmin > 0.0 ? vmax / vmin : kInf;
  rep.verdict = std::isfinite(rep.statistic) ? Verdict::pass : Verdict::fail;
  rep.details = "ball_nodes=" + std::to_string(ball.size()) +
                " sup=" + fmt(vmax) + " inf=" + fmt(vmin);
  return rep;
}

CheckReport holder_check(const ScalarField& u,
                         std::span<const DistanceField> dfs, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw PreconditionError("holder_check: alpha must lie in (0, 1)");
  if (dfs.empty())
    throw PreconditionError("holder_check: need at least one distance field");
  double stat = 0.0;
  long skipped = 0;
  for (const auto& df : dfs) {
    const double us = u[df.source];
    for (std::size_t t = 0; t < df.values.size(); ++t) {
      if (t == df.source) continue;
      const double d = df.values[t];
      if (!std::isfinite(d)) {
        ++skipped;
        continue;
      }
      stat = std::max(stat, std::abs(us - u[t]) / std::pow(d, alpha));
    }
  }
  CheckReport rep;
  rep.name = "holder";
  rep.threshold = kInf;
  rep.statistic = stat;
  rep.verdict = std::isfinite(stat) ? Verdict::pass : Verdict::fail;
  rep.details = "sources=" + std::to_string(dfs.size()) +
                " unreachable_pairs=" + std::to_string(skipped) +
                " alpha=" + fmt(alpha);
  return rep;
}

CheckReport poincare_check(const FrameOperator& op, const EigenResult& res,
                           int n_fields, std::uint64_t seed) {
  if (n_fields < 1)
    throw PreconditionError("poincare_check: n_fields must be >= 1");
  const double p = res.p;
  const double lambda = res.lambda1;

  std::mt19937_64 rng(seed);
  double max_ratio = 0.0;
  for (int j = 0; j < n_fields; ++j) {
    ScalarField u = random_trig_field(op.grid_ptr(), rng);
    const double norm = lp_norm(u, p);
    if (norm == 0.0) {
      --j;  // resample the degenerate draw
      continue;
    }
    const double energy = p_energy(op.gradient(u), p);
    max_ratio = std::max(max_ratio, lambda * std::pow(norm, p) / energy);
  }

  const double sharp =
      lambda * std::pow(lp_norm(res.u1, p), p) / p_energy(op.gradient(res.u1), p);

  CheckReport rep;
  rep.name = "poincare";
  rep.threshold = 1.0 + 1e-10;
  rep.statistic = max_ratio;
  const bool sharp_ok = std::abs(sharp - 1.0) <= 1e-8;
  rep.verdict = (max_ratio <= rep.threshold && sharp_ok) ? Verdict::pass
                                                         : Verdict::fail;
  rep.details = "max_ratio=" + fmt(max_ratio) + " u1_ratio=" + fmt(sharp) +
                " fields=" + std::to_string(n_fields);
  return rep;
}

CheckReport lattice_check(const FrameOperator& op,
                          std::span<const ScalarField> samples, double p) {
  if (samples.empty())
    throw PreconditionError("lattice_check: need at least one sample field");
  double stat = 0.0;
  for (const auto& u : samples) {
    const double e = p_energy(op.gradient(u), p);
    ScalarField au = u;
    for (double& v : au.values()) v = std::abs(v);
    const double ea = p_energy(op.gradient(au), p);
    if (e > 0.0) stat = std::max(stat, std::abs(ea - e) / e);
  }
  CheckReport rep;
  rep.name = "lattice";
  rep.threshold = kInf;
  rep.statistic = stat;
  rep.verdict = std::isfinite(stat) ? Verdict::pass : Verdict::fail;
  rep.details = "samples=" + std::to_string(samples.size()) + " p=" + fmt(p);
  return rep;
}

CheckReport monotonicity_check(const FrameOperator& inner,
                               const FrameOperator& outer,
                               const SolverConfig& cfg) {
  const Grid& gi = inner.grid();
  const Grid& go = outer.grid();
  if (gi.resolution() != go.resolution() || gi.bounds() != go.bounds())
    throw PreconditionError("monotonicity_check: masks live on different lattices");
  for (std::size_t i = 0; i < gi.interior_count(); ++i) {
    if (!go.is_interior_flat(gi.flat_of_interior(i)))
      throw PreconditionError("monotonicity_check: inner mask is not nested");
  }

  auto solve = [&](const FrameOperator& op) {
    return cfg.p == 2.0 ? solve_p2(op, cfg) : solve_p(op, cfg);
  };

  CheckReport rep;
  rep.name = "domain_monotonicity";
  rep.threshold = 1e-10;
  try {
    const double li = solve(inner).lambda1;
    const double lo = solve(outer).lambda1;
    rep.statistic = lo - li;
    rep.verdict = li >= lo - 1e-10 ? Verdict::pass : Verdict::fail;
    rep.details = "lambda_inner=" + fmt(li) + " lambda_outer=" + fmt(lo);
  } catch (const SolverError& e) {
    rep.verdict = Verdict::inconclusive;
    rep.statistic = kInf;
    rep.details = std::string("solver failure: ") + e.what();
  }
  return rep;
}

CheckReport refinement_check(const std::string& name, double coarse_stat,
                             double fine_stat, double max_ratio) {
  CheckReport rep;
  rep.name = name;
  rep.threshold = max_ratio;
  if (coarse_stat > 0.0) {
    rep.statistic = fine_stat / coarse_stat;
  } else {
    rep.statistic = fine_stat == 0.0 ? 0.0 : kInf;
  }
  rep.verdict = rep.statistic <= max_ratio ? Verdict::pass : Verdict::fail;
  rep.details = "coarse=" + fmt(coarse_stat) + " fine=" + fmt(fine_stat);
  return rep;
}

ScalarField random_trig_field(const GridPtr& grid, std::mt19937_64& rng) {
  const std::size_t dim = grid->dim();
  const auto& bounds = grid->bounds();
  std::uniform_int_distribution<int> freq(1, 4);
  std::normal_distribution<double> amp(0.0, 1.0);

  constexpr int kTerms = 4;
  std::vector<std::vector<int>> freqs(kTerms, std::vector<int>(dim));
  std::vector<double> coeffs(kTerms);
  for (int t = 0; t < kTerms; ++t) {
    for (std::size_t k = 0; k < dim; ++k) freqs[t][k] = freq(rng);
    coeffs[t] = amp(rng);
  }

  return ScalarField::from_function(grid, [&](std::span<const double> x) {
    double v = 0.0;
    for (int t = 0; t < kTerms; ++t) {
      double term = coeffs[t];
      for (std::size_t k = 0; k < dim; ++k) {
        const double s = (x[k] - bounds[k].first) /
                         (bounds[k].second - bounds[k].first);
        term *= std::sin(freqs[t][k] * M_PI * s);
      }
      v += term;
    }
    return v;
  });
}

}  // namespace sublap
