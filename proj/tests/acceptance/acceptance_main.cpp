// Acceptance suite: one pass/fail line per criterion. Run with no
// arguments for the full gate or with criterion numbers (1..14) to select.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sublap/eigensolve.hpp"
#include "sublap/errors.hpp"
#include "sublap/metric.hpp"
#include "sublap/verify.hpp"

using namespace sublap;
using clk = std::chrono::steady_clock;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::function<bool(std::string&)> run;
};

double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

GridPtr unit_interval(int res) {
  return build_grid(DomainSpec::box({{0.0, 1.0}}), {res});
}
GridPtr unit_square(int res) {
  return build_grid(DomainSpec::box({{0.0, 1.0}, {0.0, 1.0}}), {res});
}
GridPtr sym_square(int res) {
  return build_grid(DomainSpec::box({{-1.0, 1.0}, {-1.0, 1.0}}), {res});
}
GridPtr sym_cube(int res) {
  return build_grid(DomainSpec::box({{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}),
                    {res});
}

std::vector<Point> all_interior_points(const Grid& grid) {
  std::vector<Point> pts;
  pts.reserve(grid.interior_count());
  for (std::size_t i = 0; i < grid.interior_count(); ++i)
    pts.push_back(grid.point_of_interior(i));
  return pts;
}

// ---------------------------------------------------------------- c1
bool c01(std::string& detail) {
  const auto t0 = clk::now();
  FrameOperator op(VectorFieldFrame::euclidean(1), unit_interval(512));
  SolverConfig cfg;
  cfg.tol_rel = 1e-12;
  cfg.tol_res = 1e-9;
  const EigenResult r = solve_p2(op, cfg);
  const double elapsed = seconds_since(t0);
  const double exact = M_PI * M_PI;
  const double shot = oracles::shooting_lambda1(2.0, 1e-4);
  const double rel = std::abs(r.lambda1 - exact) / exact;
  detail = "lambda=" + fmt(r.lambda1) + " pi^2=" + fmt(exact) +
           " shooting=" + fmt(shot) + " rel=" + fmt(rel) +
           " time=" + fmt(elapsed) + "s";
  return rel < 0.01 && std::abs(r.lambda1 - shot) / shot < 0.01 &&
         elapsed < 5.0;
}

// ---------------------------------------------------------------- c2
bool c02(std::string& detail) {
  const auto t0 = clk::now();
  FrameOperator op(VectorFieldFrame::euclidean(2), unit_square(128));
  SolverConfig cfg;
  cfg.tol_rel = 1e-12;
  cfg.tol_res = 1e-9;
  const EigenResult r = solve_p2(op, cfg);
  const double elapsed = seconds_since(t0);
  const double exact = 2.0 * M_PI * M_PI;
  const double rel = std::abs(r.lambda1 - exact) / exact;
  detail = "lambda=" + fmt(r.lambda1) + " 2pi^2=" + fmt(exact) +
           " rel=" + fmt(rel) + " time=" + fmt(elapsed) + "s";
  return rel < 0.01 && elapsed < 60.0;
}

// ---------------------------------------------------------------- c3
bool c03(std::string& detail) {
  // The shooting oracle is integrated first and never sees the solver.
  const double oracle_p3 = oracles::shooting_lambda1(3.0, 1e-4);
  const double oracle_p15 = oracles::shooting_lambda1(1.5, 1e-4);

  FrameOperator op(VectorFieldFrame::euclidean(1), unit_interval(512));

  SolverConfig c3;
  c3.p = 3.0;
  c3.tol_res = 3e-4;
  c3.max_iter = 100000;
  const double l3 = solve_p(op, c3).lambda1;
  const double rel3 = std::abs(l3 - oracle_p3) / oracle_p3;

  // p < 2 converges in lambda long before the stiff residual relaxes, so
  // the run stops on the windowed Rayleigh-decrease test with a loose
  // residual cap and a patient iteration budget.
  SolverConfig c15;
  c15.p = 1.5;
  c15.init = SolverConfig::Init::linear_eigvec;
  c15.tol_rel = 1e-8;
  c15.tol_res = 8.0;
  c15.max_iter = 1200000;
  const double l15 = solve_p(op, c15).lambda1;
  const double rel15 = std::abs(l15 - oracle_p15) / oracle_p15;

  detail = "p=3: lambda=" + fmt(l3) + " oracle=" + fmt(oracle_p3) +
           " rel=" + fmt(rel3) + "; p=1.5: lambda=" + fmt(l15) +
           " oracle=" + fmt(oracle_p15) + " rel=" + fmt(rel15);
  return rel3 < 0.02 && rel15 < 0.02;
}

// ---------------------------------------------------------------- c4
bool c04(std::string& detail) {
  FrameOperator op(VectorFieldFrame::grushin(), sym_square(64));
  const double dense =
      oracles::dense_smallest_eigenvalue(op.assemble_p2_matrix());
  SolverConfig cfg;
  cfg.tol_rel = 1e-13;
  cfg.tol_res = 1e-10;
  const EigenResult r = solve_p2(op, cfg);
  const double rel = std::abs(r.lambda1 - dense) / dense;
  detail = "lambda=" + fmt(r.lambda1) + " dense=" + fmt(dense) +
           " rel=" + fmt(rel);
  return rel < 1e-6;
}

// ---------------------------------------------------------------- c5
bool c05(std::string& detail) {
  struct Case {
    const char* name;
    GridPtr grid;
  };
  const std::vector<Case> cases = {{"euclidean", unit_square(48)},
                                   {"grushin", sym_square(48)},
                                   {"heisenberg", sym_cube(16)}};
  detail.clear();
  bool ok = true;
  for (const auto& c : cases) {
    FrameOperator op(VectorFieldFrame::builtin(c.name, c.grid->dim()),
                     c.grid);
    SolverConfig lin;
    lin.tol_rel = 1e-13;
    lin.tol_res = 1e-10;
    const double a = solve_p2(op, lin).lambda1;
    SolverConfig non;
    non.tol_res = 1e-5;
    non.max_iter = 200000;
    const double b = solve_p(op, non).lambda1;
    const double rel = std::abs(a - b) / a;
    detail += std::string(c.name) + ": rel=" + fmt(rel) + " ";
    ok = ok && rel < 1e-6;
  }
  return ok;
}

// ---------------------------------------------------------------- c6
bool c06(std::string& detail) {
  detail.clear();
  bool ok = true;
  for (const double p : {1.5, 2.0, 3.0, 4.0}) {
    for (const int m : {2, 3}) {
      const CheckReport rep = convexity_check(
          p, 100000, 20250801 + static_cast<std::uint64_t>(10 * p) + m, m);
      ok = ok && rep.passed() && rep.statistic > 0.0;
      if (p == 2.0) ok = ok && std::abs(rep.statistic - 1.0) <= 1e-12;
      detail += "p" + fmt(p) + "m" + std::to_string(m) + ":C=" +
                fmt(rep.statistic) + " ";
    }
  }
  return ok;
}

// ---------------------------------------------------------------- c7
bool c07(std::string& detail) {
  FrameOperator op(VectorFieldFrame::grushin(), sym_square(48));
  SolverConfig cfg;
  cfg.p = 2.5;
  cfg.tol_res = 1e-5;
  cfg.max_iter = 200000;
  cfg.seed = 11;
  const CheckReport rep = simplicity_check(op, cfg, 10);
  detail = rep.details;
  return rep.passed();
}

// ---------------------------------------------------------------- c8
bool c08(std::string& detail) {
  struct Run {
    const char* label;
    const char* frame;
    GridPtr grid;
    double p;
  };
  const std::vector<Run> runs = {
      {"euclidean-1d", "euclidean", unit_interval(512), 2.0},
      {"euclidean-2d", "euclidean", unit_square(128), 2.0},
      {"grushin", "grushin", sym_square(64), 2.0},
      {"heisenberg", "heisenberg", sym_cube(16), 2.0},
      {"grushin-p2.5", "grushin", sym_square(48), 2.5}};
  detail.clear();
  bool ok = true;
  for (const auto& r : runs) {
    FrameOperator op(VectorFieldFrame::builtin(r.frame, r.grid->dim()),
                     r.grid);
    SolverConfig cfg;
    cfg.p = r.p;
    if (r.p != 2.0) {
      cfg.tol_res = 1e-5;
      cfg.max_iter = 200000;
    }
    const EigenResult res =
        r.p == 2.0 ? solve_p2(op, cfg) : solve_p(op, cfg);
    const CheckReport rep = positivity_check(res);
    detail += std::string(r.label) + ":min=" + fmt(rep.statistic) + " ";
    ok = ok && rep.passed();
  }
  return ok;
}

// ---------------------------------------------------------------- c9
bool c09(std::string& detail) {
  FrameOperator op(VectorFieldFrame::grushin(), sym_square(48));
  SolverConfig cfg;
  cfg.tol_rel = 1e-13;
  cfg.tol_res = 1e-10;
  const EigenResult res = solve_p2(op, cfg);
  const CheckReport rep = poincare_check(op, res, 100, 424242);
  detail = rep.details;
  return rep.passed();
}

// ---------------------------------------------------------------- c10
bool c10(std::string& detail) {
  const auto q_of = [](const VectorFieldFrame& frame, const GridPtr& grid) {
    const auto pts = all_interior_points(*grid);
    const auto ss = build_spanning_set(frame, pts);
    return local_q(ss, pts);
  };
  const int qe = q_of(VectorFieldFrame::euclidean(2), unit_square(17));
  const int qg = q_of(VectorFieldFrame::grushin(), sym_square(33));
  const int qh = q_of(VectorFieldFrame::heisenberg(), sym_cube(9));
  detail = "Q(euclidean)=" + std::to_string(qe) +
           " Q(grushin)=" + std::to_string(qg) +
           " Q(heisenberg)=" + std::to_string(qh);
  return qe == 2 && qg == 3 && qh == 4;
}

// ---------------------------------------------------------------- c11
bool c11(std::string& detail) {
  // Euclidean frame: graph metric within 3% of |x - y| from the center.
  auto grid = unit_square(128);
  const auto frame = VectorFieldFrame::euclidean(2);
  const auto g = build_reachability_graph(frame, grid, 2);
  const auto src = static_cast<std::size_t>(
      grid->nearest_interior(std::vector<double>{0.5, 0.5}));
  const DistanceField df = control_distance_field(g, src);
  const auto sp = grid->point_of_interior(src);
  double worst = 0.0;
  for (std::size_t i = 0; i < df.values.size(); ++i) {
    if (i == src) continue;
    const auto x = grid->point_of_interior(i);
    const double exact = std::hypot(x[0] - sp[0], x[1] - sp[1]);
    worst = std::max(worst, std::abs(df.values[i] - exact) / exact);
  }

  // Grushin: log-log slope of d((0,0),(0,y)) across Richardson-extrapolated
  // refinements h, h/2, h/4.
  const std::vector<double> ys{0.125, 0.25, 0.375, 0.5};
  std::vector<std::vector<double>> dists(3);
  const int resolutions[3] = {33, 65, 129};
  for (int level = 0; level < 3; ++level) {
    auto ggrid = sym_square(resolutions[level]);
    const auto gg =
        build_reachability_graph(VectorFieldFrame::grushin(), ggrid, 2);
    const auto gsrc = static_cast<std::size_t>(
        ggrid->nearest_interior(std::vector<double>{0.0, 0.0}));
    const DistanceField gdf = control_distance_field(gg, gsrc);
    for (const double y : ys) {
      const auto t = static_cast<std::size_t>(
          ggrid->nearest_interior(std::vector<double>{0.0, y}));
      dists[level].push_back(gdf.values[t]);
    }
  }
  std::vector<double> extrap;
  for (std::size_t j = 0; j < ys.size(); ++j)
    extrap.push_back(
        oracles::richardson(dists[0][j], dists[1][j], dists[2][j]));
  const double slope = oracles::loglog_slope(ys, extrap);

  detail = "euclid_worst_rel=" + fmt(worst) + " grushin_slope=" + fmt(slope);
  return worst < 0.03 && std::abs(slope - 0.5) <= 0.05;
}

// ---------------------------------------------------------------- c12
bool c12(std::string& detail) {
  std::mt19937_64 rng(321);
  std::normal_distribution<double> dist;
  detail.clear();
  bool ok = true;
  struct Case {
    const char* name;
    GridPtr grid;
  };
  for (const auto& c : std::vector<Case>{{"euclidean", unit_square(33)},
                                         {"grushin", sym_square(33)},
                                         {"heisenberg", sym_cube(9)}}) {
    FrameOperator op(VectorFieldFrame::builtin(c.name, c.grid->dim()),
                     c.grid);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      ScalarField u(c.grid);
      for (double& v : u.values()) v = dist(rng);
      HField v(c.grid, op.m());
      for (double& w : v.values()) w = dist(rng);
      const HField xu = op.gradient(u);
      double lhs = 0.0, nx = 0.0, nv = 0.0;
      for (std::size_t i = 0; i < xu.values().size(); ++i) {
        lhs += xu.values()[i] * v.values()[i];
        nx += xu.values()[i] * xu.values()[i];
        nv += v.values()[i] * v.values()[i];
      }
      const double vol = c.grid->cell_volume();
      lhs *= vol;
      const double rhs = vol_dot(u, op.adjoint(v));
      const double scale = std::sqrt(nx) * std::sqrt(nv) * vol;
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, 1e-30));
    }
    detail += std::string(c.name) + ":worst=" + fmt(worst) + " ";
    ok = ok && worst <= 1e-12;
  }
  return ok;
}

// ---------------------------------------------------------------- c13
bool c13(std::string& detail) {
  FrameOperator op(VectorFieldFrame::euclidean(2), unit_square(64));
  SolverConfig cfg;
  cfg.tol_rel = 1e-12;
  cfg.tol_res = 1e-9;
  const EigenResult first = solve_p2(op, cfg);
  const SecondModeResult second = second_mode_p2(op, cfg, first);
  const CheckReport sign = sign_change_check(second.u2, true);
  const double ratio = second.lambda2 / first.lambda1;
  detail = "lambda2/lambda1=" + fmt(ratio) + " " + sign.details;
  return sign.passed() && std::abs(ratio - 2.5) / 2.5 < 0.02;
}

// ---------------------------------------------------------------- c14
bool c14(std::string& detail) {
  SolverConfig cfg;
  detail.clear();
  bool ok = true;
  struct Case {
    const char* name;
    DomainSpec spec;
    int res;
  };
  const std::vector<Case> cases = {
      {"euclidean", DomainSpec::box({{0.0, 1.0}, {0.0, 1.0}}), 33},
      {"grushin", DomainSpec::box({{-1.0, 1.0}, {-1.0, 1.0}}), 33},
      {"heisenberg",
       DomainSpec::box({{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}), 13}};
  for (const auto& c : cases) {
    auto outer = build_grid(c.spec, {c.res});
    std::vector<std::pair<double, double>> inner_box;
    for (const auto& [lo, hi] : c.spec.bounds) {
      const double mid = 0.5 * (lo + hi);
      const double ext = 0.25 * (hi - lo);
      inner_box.emplace_back(mid - ext, mid + ext);
    }
    auto inner =
        build_grid(c.spec, {c.res}, [&](std::span<const double> x) {
          for (std::size_t k = 0; k < x.size(); ++k)
            if (x[k] <= inner_box[k].first || x[k] >= inner_box[k].second)
              return false;
          return true;
        });
    const VectorFieldFrame frame =
        VectorFieldFrame::builtin(c.name, outer->dim());
    const CheckReport rep = monotonicity_check(
        FrameOperator(frame, inner), FrameOperator(frame, outer), cfg);
    detail += std::string(c.name) + ":" + rep.details + " ";
    ok = ok && rep.passed();
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "1D Dirichlet p-laplacian, p=2, res 512: lambda within 1% of pi^2,"
          " under 5 s", c01},
      {2, "2D unit square, p=2, res 128: lambda within 1% of 2 pi^2, under"
          " 60 s", c02},
      {3, "1D p in {1.5, 3}, res 512: lambda within 2% of the shooting"
          " oracle", c03},
      {4, "grushin res 64, p=2: matches the dense eigen oracle to 1e-6",
       c04},
      {5, "solve_p at p=2 agrees with solve_p2 to 1e-6 on all built-ins",
       c05},
      {6, "convexity inequalities: 1e5 samples, C>0, C(p=2)=1 to 1e-12",
       c06},
      {7, "simplicity: grushin p=2.5 res 48, 10 random inits agree", c07},
      {8, "positivity: min u1 > 0 in every converged acceptance run", c08},
      {9, "poincare with 1/lambda1: 100 random fields + sharpness at u1",
       c09},
      {10, "homogeneous dimensions: 2 / 3 / 4 exactly", c10},
      {11, "control distance: euclid within 3%; grushin slope 0.5 +- 0.05",
       c11},
      {12, "discrete duality to 1e-12 over 100 random pairs per frame", c12},
      {13, "p=2 second mode: sign change and lambda2/lambda1 = 2.5 +- 2%",
       c13},
      {14, "domain monotonicity of lambda1 on nested masks", c14},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const Error& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] C%02d %s | %s\n", ok ? "PASS" : "FAIL", c.id, c.title,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures)
    std::printf("%d criterion(s) FAILED\n", failures);
  else
    std::printf("all selected acceptance criteria passed\n");
  return failures == 0 ? 0 : 1;
}
