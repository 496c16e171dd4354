#include "sublap/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <ostream>
#include <sstream>

#include "sublap/errors.hpp"
#include "sublap/io.hpp"
#include "sublap/verify.hpp"
#include "sublap/version.hpp"

namespace sublap {

namespace {

namespace fs = std::filesystem;

std::string header_comment(const RunConfig& cfg) {
  return std::string("sublap ") + kVersion + " config_hash=" +
         cfg.config_hash();
}

std::string resolution_string(const std::vector<int>& res) {
  std::string s;
  for (std::size_t k = 0; k < res.size(); ++k) {
    if (k) s += "x";
    s += std::to_string(res[k]);
  }
  return s;
}

std::vector<Point> interior_points(const Grid& grid) {
  std::vector<Point> pts;
  pts.reserve(grid.interior_count());
  for (std::size_t i = 0; i < grid.interior_count(); ++i)
    pts.push_back(grid.point_of_interior(i));
  return pts;
}

void warn_irrelevant(Command cmd, const RunConfig& cfg, std::ostream& err) {
  static const std::map<std::string, std::string> owner = {
      {"solver.p_list", "sweep"},
      {"solver.source", "distance"},
      {"solver.suite", "verify"},
      {"solver.verify_samples", "verify"},
      {"solver.verify_fields", "verify"},
      {"solver.verify_inits", "verify"}};
  static const std::map<Command, std::string> names = {
      {Command::solve, "solve"},
      {Command::sweep, "sweep"},
      {Command::distance, "distance"},
      {Command::dimension, "dimension"},
      {Command::verify, "verify"}};
  const std::string& running = names.at(cmd);
  for (const auto& key : cfg.present) {
    const auto it = owner.find(key);
    if (it != owner.end() && it->second != running)
      err << "warning: key '" << key << "' is ignored by '" << running
          << "'\n";
  }
}

struct Workspace {
  VectorFieldFrame frame;
  GridPtr grid;
  SpanningSet spanning;
  int q = 0;
};

Workspace make_workspace(const RunConfig& cfg) {
  Workspace w{make_frame(cfg), make_grid(cfg), {}, 0};
  const auto pts = interior_points(*w.grid);
  w.spanning = build_spanning_set(w.frame, pts, cfg.s_max, kSpanTol);
  w.q = local_q(w.spanning, pts);
  return w;
}

ResultRow make_row(const RunConfig& cfg, const Workspace& w,
                   const EigenResult& res) {
  ResultRow row;
  row.p = res.p;
  row.lambda1 = res.lambda1;
  row.poincare_constant = res.poincare_constant;
  row.residual = res.residual;
  row.iterations = res.iterations;
  row.resolution = resolution_string(cfg.resolution);
  row.frame = w.frame.label;
  row.omega = w.grid->measure();
  row.q = w.q;
  row.pstar = p_star(res.p, w.q);
  return row;
}

EigenResult solve_for(const FrameOperator& op, const SolverConfig& solver) {
  return solver.p == 2.0 ? solve_p2(op, solver) : solve_p(op, solver);
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  Workspace w = make_workspace(cfg);
  FrameOperator op(w.frame, w.grid);
  const EigenResult res = solve_for(op, cfg.solver);
  const ResultRow row = make_row(cfg, w, res);

  const fs::path dir(cfg.output_dir);
  write_result_rows(std::span(&row, 1), dir / "result.csv",
                    header_comment(cfg));
  write_field(res.u1, dir / "u1.field", header_comment(cfg));
  out << kResultHeader << "\n" << result_row_line(row) << "\n";
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.p_list.empty())
    throw PreconditionError("sweep needs solver.p_list");
  Workspace w = make_workspace(cfg);
  FrameOperator op(w.frame, w.grid);
  std::vector<ResultRow> rows;
  for (const double p : cfg.p_list) {
    SolverConfig solver = cfg.solver;
    solver.p = p;
    rows.push_back(make_row(cfg, w, solve_for(op, solver)));
  }
  write_result_rows(rows, fs::path(cfg.output_dir) / "sweep.csv",
                    header_comment(cfg));
  out << kResultHeader << "\n";
  for (const auto& row : rows) out << result_row_line(row) << "\n";
  return kExitOk;
}

int cmd_distance(const RunConfig& cfg, std::ostream& out) {
  const VectorFieldFrame frame = make_frame(cfg);
  const GridPtr grid = make_grid(cfg);

  Point src = cfg.source;
  if (src.empty()) {
    for (const auto& [lo, hi] : grid->bounds())
      src.push_back(0.5 * (lo + hi));
  }
  const std::int64_t source = grid->nearest_interior(src);
  if (source < 0)
    throw PreconditionError("distance: source point is outside the domain");

  const ReachabilityGraph g =
      build_reachability_graph(frame, grid, cfg.stencil_radius, cfg.span_tol);
  const DistanceField df =
      control_distance_field(g, static_cast<std::size_t>(source));
  write_distance_table(df, fs::path(cfg.output_dir) / "distance.csv",
                       header_comment(cfg));
  std::size_t reachable = 0;
  for (const double d : df.values)
    if (std::isfinite(d)) ++reachable;
  out << "distance field from source node " << source << ": " << reachable
      << "/" << df.values.size() << " nodes reachable\n";
  return kExitOk;
}

int cmd_dimension(const RunConfig& cfg, std::ostream& out) {
  Workspace w = make_workspace(cfg);
  ScalarField qfield(w.grid);
  for (std::size_t i = 0; i < qfield.size(); ++i)
    qfield[i] = pointwise_q(w.spanning, w.grid->point_of_interior(i));
  write_field(qfield, fs::path(cfg.output_dir) / "pointwise_q.csv",
              header_comment(cfg), "q");
  out << "Q = " << w.q << "\n";
  out << "hormander_step = " << w.spanning.step
      << " spanning_vectors = " << w.spanning.size() << "\n";
  return kExitOk;
}

ScalarField trig_sample(const GridPtr& grid, std::span<const int> freqs) {
  const auto& bounds = grid->bounds();
  return ScalarField::from_function(grid, [&](std::span<const double> x) {
    double v = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double t =
          (x[k] - bounds[k].first) / (bounds[k].second - bounds[k].first);
      v *= std::sin(freqs[k] * M_PI * t);
    }
    return v;
  });
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  static const std::set<std::string> kSuites = {
      "all",     "convexity", "positivity", "sign_change", "poincare",
      "simplicity", "harnack", "holder",    "lattice",     "monotonicity"};
  if (!kSuites.count(cfg.suite))
    throw PreconditionError("unknown verify suite '" + cfg.suite + "'");

  std::vector<CheckReport> reports;
  const auto want = [&](const std::string& name) {
    return cfg.suite == "all" || cfg.suite == name;
  };

  if (want("convexity")) {
    for (const double p : {1.5, 2.0, 3.0, 4.0})
      for (const int m : {2, 3})
        reports.push_back(convexity_check(
            p, cfg.verify_samples,
            cfg.solver.seed + static_cast<std::uint64_t>(100 * p) + m, m));
  }

  const bool needs_solve = want("positivity") || want("sign_change") ||
                           want("poincare") || want("simplicity") ||
                           want("harnack") || want("holder") ||
                           want("lattice") || want("monotonicity");
  if (needs_solve) {
    Workspace w = make_workspace(cfg);
    FrameOperator op(w.frame, w.grid);
    EigenResult res;
    bool solved = false;
    try {
      res = solve_for(op, cfg.solver);
      solved = true;
    } catch (const SolverError& e) {
      CheckReport rep;
      rep.name = "first_eigenpair";
      rep.verdict = Verdict::inconclusive;
      rep.details = e.what();
      reports.push_back(rep);
    }

    if (solved && want("positivity")) reports.push_back(positivity_check(res));
    if (solved && want("sign_change")) {
      reports.push_back(sign_change_check(res.u1, false));
      if (cfg.solver.p == 2.0) {
        const SecondModeResult second = second_mode_p2(op, cfg.solver, res);
        reports.push_back(sign_change_check(second.u2, true));
      }
    }
    if (solved && want("poincare"))
      reports.push_back(
          poincare_check(op, res, cfg.verify_fields, cfg.solver.seed + 7));
    if (want("simplicity"))
      reports.push_back(simplicity_check(op, cfg.solver, cfg.verify_inits));

    // Refinement pair for the Harnack/Hölder/lattice proxies.
    if (solved && (want("harnack") || want("holder") || want("lattice"))) {
      RunConfig fine_cfg = cfg;
      for (int& r : fine_cfg.resolution) r = 2 * r;
      Workspace wf = make_workspace(fine_cfg);
      FrameOperator opf(wf.frame, wf.grid);
      EigenResult resf = solve_for(opf, cfg.solver);

      if (want("harnack") || want("holder")) {
        double min_extent = kUnreachable;
        Point center;
        for (const auto& [lo, hi] : w.grid->bounds()) {
          min_extent = std::min(min_extent, hi - lo);
          center.push_back(0.5 * (lo + hi));
        }
        const double r = 0.12 * min_extent;

        auto with_distance = [&](const Workspace& ws, const EigenResult& rs,
                                 auto&& fn) {
          const ReachabilityGraph g = build_reachability_graph(
              ws.frame, ws.grid, cfg.stencil_radius, cfg.span_tol);
          const std::int64_t src = ws.grid->nearest_interior(center);
          if (src < 0)
            throw PreconditionError("verify: domain center is exterior");
          const DistanceField df =
              control_distance_field(g, static_cast<std::size_t>(src));
          fn(g, df, rs);
        };

        double harnack_coarse = 0.0;
        double harnack_fine = 0.0;
        double holder_coarse = 0.0;
        double holder_fine = 0.0;
        with_distance(w, res, [&](const ReachabilityGraph& g,
                                  const DistanceField& df,
                                  const EigenResult& rs) {
          if (want("harnack")) {
            CheckReport h = harnack_check(rs.u1, df, r);
            harnack_coarse = h.statistic;
          }
          if (want("holder")) {
            std::vector<DistanceField> dfs;
            dfs.push_back(df);
            const std::size_t stride =
                std::max<std::size_t>(1, g.grid->interior_count() / 5);
            for (std::size_t i = 0; i < g.grid->interior_count();
                 i += stride)
              dfs.push_back(control_distance_field(g, i));
            holder_coarse = holder_check(rs.u1, dfs, 0.5).statistic;
          }
        });
        with_distance(wf, resf, [&](const ReachabilityGraph& g,
                                    const DistanceField& df,
                                    const EigenResult& rs) {
          if (want("harnack")) {
            CheckReport h = harnack_check(rs.u1, df, r);
            harnack_fine = h.statistic;
            reports.push_back(std::move(h));
          }
          if (want("holder")) {
            std::vector<DistanceField> dfs;
            dfs.push_back(df);
            const std::size_t stride =
                std::max<std::size_t>(1, g.grid->interior_count() / 5);
            for (std::size_t i = 0; i < g.grid->interior_count();
                 i += stride)
              dfs.push_back(control_distance_field(g, i));
            CheckReport h = holder_check(rs.u1, dfs, 0.5);
            holder_fine = h.statistic;
            reports.push_back(std::move(h));
          }
        });
        if (want("harnack"))
          reports.push_back(refinement_check("harnack_refinement",
                                             harnack_coarse, harnack_fine,
                                             1.5));
        if (want("holder"))
          reports.push_back(refinement_check("holder_refinement",
                                             holder_coarse, holder_fine, 1.5));
      }

      if (want("lattice")) {
        auto samples_for = [&](const GridPtr& grid) {
          std::vector<ScalarField> fields;
          std::vector<int> f1(grid->dim(), 1);
          f1[0] = 2;
          fields.push_back(trig_sample(grid, f1));
          if (grid->dim() > 1) {
            std::vector<int> f2(grid->dim(), 1);
            f2[grid->dim() - 1] = 3;
            fields.push_back(trig_sample(grid, f2));
          }
          std::vector<int> f3(grid->dim(), 2);
          fields.push_back(trig_sample(grid, f3));
          return fields;
        };
        const auto coarse_fields = samples_for(w.grid);
        const auto fine_fields = samples_for(wf.grid);
        const double lc =
            lattice_check(op, coarse_fields, cfg.solver.p).statistic;
        CheckReport lf = lattice_check(opf, fine_fields, cfg.solver.p);
        const double fine_stat = lf.statistic;
        reports.push_back(std::move(lf));
        reports.push_back(
            refinement_check("lattice_refinement", lc, fine_stat, 1.0));
      }
    }

    if (want("monotonicity")) {
      // Inner mask: the centered box with half the extent per axis.
      const auto& bounds = w.grid->bounds();
      std::vector<std::pair<double, double>> inner_box;
      for (const auto& [lo, hi] : bounds) {
        const double c = 0.5 * (lo + hi);
        const double e = 0.25 * (hi - lo);
        inner_box.emplace_back(c - e, c + e);
      }
      DomainSpec spec;
      spec.type = cfg.domain.type;
      spec.bounds = bounds;
      spec.center = cfg.domain.center;
      spec.radius = cfg.domain.radius;
      GridPtr inner_grid = build_grid(
          spec, cfg.resolution, [&](std::span<const double> x) {
            for (std::size_t k = 0; k < x.size(); ++k)
              if (x[k] <= inner_box[k].first || x[k] >= inner_box[k].second)
                return false;
            return true;
          });
      FrameOperator inner_op(w.frame, inner_grid);
      reports.push_back(monotonicity_check(inner_op, op, cfg.solver));
    }
  }

  write_check_reports(reports, fs::path(cfg.output_dir) / "checks.csv",
                      header_comment(cfg));
  bool any_fail = false;
  bool any_inconclusive = false;
  for (const auto& rep : reports) {
    out << rep.name << ": " << to_string(rep.verdict)
        << " (statistic=" << format_double(rep.statistic) << ")\n";
    any_fail |= rep.verdict == Verdict::fail;
    any_inconclusive |= rep.verdict == Verdict::inconclusive;
  }
  if (any_fail) return kExitCheckFailed;
  if (any_inconclusive) return kExitInconclusive;
  return kExitOk;
}

}  // namespace

Command command_from_string(const std::string& name) {
  if (name == "solve") return Command::solve;
  if (name == "sweep") return Command::sweep;
  if (name == "distance") return Command::distance;
  if (name == "dimension") return Command::dimension;
  if (name == "verify") return Command::verify;
  throw PreconditionError("unknown command '" + name + "'");
}

int run_command(Command cmd, const RunConfig& cfg, std::ostream& out,
                std::ostream& err) {
  try {
    out << "# effective config (hash " << cfg.config_hash() << ")\n"
        << cfg.canonical_text();
    warn_irrelevant(cmd, cfg, err);
    switch (cmd) {
      case Command::solve:
        return cmd_solve(cfg, out);
      case Command::sweep:
        return cmd_sweep(cfg, out);
      case Command::distance:
        return cmd_distance(cfg, out);
      case Command::dimension:
        return cmd_dimension(cfg, out);
      case Command::verify:
        return cmd_verify(cfg, out);
    }
    err << "error: unhandled command\n";
    return kExitUsage;
  } catch (const SolverError& e) {
    err << "error: solver did not converge: " << e.what() << "\n";
    if (!e.trajectory().empty()) {
      err << "rayleigh trajectory (last "
          << std::min<std::size_t>(e.trajectory().size(), 5) << " of "
          << e.trajectory().size() << "):";
      const std::size_t start =
          e.trajectory().size() > 5 ? e.trajectory().size() - 5 : 0;
      for (std::size_t i = start; i < e.trajectory().size(); ++i)
        err << " " << format_double(e.trajectory()[i]);
      err << "\n";
    }
    return kExitNoConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace sublap
