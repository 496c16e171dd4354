#include "sublap/metric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <queue>

#include "sublap/errors.hpp"

namespace sublap {

ReachabilityGraph build_reachability_graph(const VectorFieldFrame& frame,
                                           GridPtr grid, int stencil_radius,
                                           double span_tol) {
  if (frame.n != grid->dim())
    throw DimensionError("reachability graph: frame/grid dimension mismatch");
  if (stencil_radius < 1)
    throw PreconditionError("reachability graph: stencil_radius >= 1");
  const std::size_t dim = grid->dim();
  const std::size_t nodes = grid->interior_count();
  if (nodes == 0) throw StructuralError("reachability graph: empty interior");

  // All nonzero stencil offsets, deterministic order.
  std::vector<std::vector<int>> offsets_list;
  {
    std::vector<int> o(dim, -stencil_radius);
    bool exhausted = false;
    while (!exhausted) {
      const bool zero =
          std::all_of(o.begin(), o.end(), [](int c) { return c == 0; });
      if (!zero) offsets_list.push_back(o);
      std::size_t k = dim;
      while (true) {
        if (k == 0) {
          exhausted = true;
          break;
        }
        --k;
        if (++o[k] <= stencil_radius) break;
        o[k] = -stencil_radius;
      }
    }
  }

  ReachabilityGraph g;
  g.grid = grid;
  g.stencil_radius = stencil_radius;
  g.span_tol = span_tol;
  g.offsets.assign(nodes + 1, 0);

  const auto spacing = grid->spacing();
  Eigen::VectorXd disp(static_cast<Eigen::Index>(dim));

  std::vector<std::vector<std::pair<std::int64_t, double>>> adj(nodes);
  for (std::size_t node = 0; node < nodes; ++node) {
    const auto x = grid->point_of_interior(node);
    // B^T is n x m: columns are the frame directions at x; factor once per
    // node and reuse for every stencil displacement.
    const Eigen::MatrixXd bt = frame.evaluate(x).transpose();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(bt);

    const auto coords = grid->coords_of_flat(grid->flat_of_interior(node));
    std::vector<int> nb(dim);
    for (const auto& o : offsets_list) {
      bool in_lattice = true;
      for (std::size_t k = 0; k < dim; ++k) {
        nb[k] = coords[k] + o[k];
        if (nb[k] < 0 || nb[k] >= grid->resolution()[k]) {
          in_lattice = false;
          break;
        }
      }
      if (!in_lattice) continue;
      const std::int64_t target =
          grid->interior_index(grid->flat_of_coords(nb));
      if (target < 0) continue;

      for (std::size_t k = 0; k < dim; ++k)
        disp[static_cast<Eigen::Index>(k)] = o[k] * spacing[k];
      const Eigen::VectorXd a = cod.solve(disp);
      const double resid = (bt * a - disp).norm();
      if (resid <= span_tol * disp.norm())
        adj[node].emplace_back(target, a.norm());
    }
  }

  for (std::size_t node = 0; node < nodes; ++node)
    g.offsets[node + 1] = g.offsets[node] + adj[node].size();
  g.targets.resize(g.offsets.back());
  g.costs.resize(g.offsets.back());
  for (std::size_t node = 0; node < nodes; ++node) {
    std::size_t at = g.offsets[node];
    for (const auto& [t, c] : adj[node]) {
      g.targets[at] = t;
      g.costs[at] = c;
      ++at;
    }
  }
  return g;
}

DistanceField control_distance_field(const ReachabilityGraph& g,
                                     std::size_t source) {
  const std::size_t nodes = g.grid->interior_count();
  if (source >= nodes)
    throw PreconditionError("distance: source is not an interior node");

  DistanceField df;
  df.grid = g.grid;
  df.source = source;
  df.values.assign(nodes, kUnreachable);
  df.values[source] = 0.0;

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.emplace(0.0, source);
  std::vector<char> settled(nodes, 0);

  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    for (std::size_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
      const auto v = static_cast<std::size_t>(g.targets[e]);
      const double nd = d + g.costs[e];
      if (nd < df.values[v]) {
        df.values[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  return df;
}

std::vector<std::size_t> metric_ball(const DistanceField& df, double r) {
  if (!(r > 0.0)) throw PreconditionError("metric_ball: r must be positive");
  std::vector<std::size_t> ball;
  for (std::size_t i = 0; i < df.values.size(); ++i)
    if (df.values[i] < r) ball.push_back(i);
  return ball;
}

}  // namespace sublap
