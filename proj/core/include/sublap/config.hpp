#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "sublap/eigensolve.hpp"
#include "sublap/frames.hpp"
#include "sublap/grid.hpp"
#include "sublap/metric.hpp"

namespace sublap {

/// One validated configuration document drives every command. Sections:
/// [frame], [domain], [grid], [solver], [output]; command-specific options
/// (p_list, source, suite, ...) live in [solver]. Unknown keys are
/// rejected; known keys irrelevant to the running command only warn.
struct RunConfig {
  // [frame]
  std::string frame_name = "euclidean";
  std::string frame_file;  // custom polynomial table; overrides frame_name

  // [domain]
  DomainSpec domain;

  // [grid]
  std::vector<int> resolution;  // per axis

  // [solver]
  SolverConfig solver;
  std::vector<double> p_list;   // sweep
  std::vector<double> source;   // distance source point; empty = domain center
  int stencil_radius = kDefaultStencilRadius;
  double span_tol = kDefaultEdgeSpanTol;
  int s_max = kDefaultMaxStep;
  std::string suite = "all";
  int verify_samples = 100000;
  int verify_fields = 100;
  int verify_inits = 10;

  // [output]
  std::string output_dir = "out";

  /// Keys the document actually set, as "section.key".
  std::set<std::string> present;

  /// Deterministic rendering of the effective (defaults-filled) config.
  std::string canonical_text() const;
  /// Hash of canonical_text(), stamped on every CSV this run emits.
  std::string config_hash() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::filesystem::path& path);

/// Resolves the configured frame; the euclidean frame adapts its dimension
/// to the domain bounds, fixed-dimension frames must match them.
VectorFieldFrame make_frame(const RunConfig& cfg);
GridPtr make_grid(const RunConfig& cfg);

}  // namespace sublap
