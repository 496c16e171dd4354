#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sublap/frames.hpp"
#include "sublap/grid.hpp"

namespace sublap {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();
inline constexpr int kDefaultStencilRadius = 2;
inline constexpr double kDefaultEdgeSpanTol = 1e-8;

/// One-step reachability between interior nodes: node x connects to a
/// stencil neighbor y when the displacement is realizable by the frame at x,
/// y − x = Σ a_i X_i I(x) up to a relative residual of span_tol; the edge
/// cost is |a|, the Euclidean norm of the control vector.
struct ReachabilityGraph {
  GridPtr grid;
  int stencil_radius = kDefaultStencilRadius;
  double span_tol = kDefaultEdgeSpanTol;
  std::vector<std::size_t> offsets;  // CSR, interior_count + 1
  std::vector<std::int64_t> targets;
  std::vector<double> costs;

  std::size_t edge_count() const { return targets.size(); }
};

ReachabilityGraph build_reachability_graph(
    const VectorFieldFrame& frame, GridPtr grid,
    int stencil_radius = kDefaultStencilRadius,
    double span_tol = kDefaultEdgeSpanTol);

/// Nodal approximation of the control distance d_X(source, ·) relative to
/// the interior; unreachable nodes carry +inf.
struct DistanceField {
  GridPtr grid;
  std::size_t source = 0;  // interior index
  std::vector<double> values;
};

/// Single-source shortest path (Dijkstra) over the reachability graph.
DistanceField control_distance_field(const ReachabilityGraph& g,
                                     std::size_t source);

/// Interior indices of the metric ball B_X(source, r) = { d < r }.
std::vector<std::size_t> metric_ball(const DistanceField& df, double r);

}  // namespace sublap
