#include "sublap/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sublap/errors.hpp"
#include "sublap/io.hpp"

namespace sublap {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

double parse_real(const std::string& value, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a real number, got '" + value + "'", key, line);
  }
}

long parse_int(const std::string& value, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + value + "'", key, line);
  }
}

/// p lists accept explicit values and start:stop:step ranges.
std::vector<double> parse_real_list(const std::string& value,
                                    const std::string& key, int line) {
  std::vector<double> out;
  for (const auto& tok : tokens(value)) {
    const auto c1 = tok.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_real(tok, key, line));
      continue;
    }
    const auto c2 = tok.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw ParseError("range needs start:stop:step", key, line);
    const double start = parse_real(tok.substr(0, c1), key, line);
    const double stop = parse_real(tok.substr(c1 + 1, c2 - c1 - 1), key, line);
    const double step = parse_real(tok.substr(c2 + 1), key, line);
    if (!(step > 0.0)) throw ParseError("range step must be positive", key, line);
    for (double v = start; v <= stop + 1e-12 * step; v += step)
      out.push_back(v);
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> key_line;

  static const std::set<std::string> kSections = {"frame", "domain", "grid",
                                                  "solver", "output"};
  static const std::map<std::string, std::set<std::string>> kKeys = {
      {"frame", {"name", "file"}},
      {"domain", {"type", "bounds", "center", "radius"}},
      {"grid", {"resolution"}},
      {"solver",
       {"p", "p_list", "tol_rel", "tol_res", "max_iter", "seed", "n_inits",
        "init", "step_init", "step_shrink", "step_c", "stencil_radius",
        "span_tol", "s_max", "source", "suite", "verify_samples",
        "verify_fields", "verify_inits"}},
      {"output", {"dir"}}};

  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string domain_type = "box";
  std::vector<double> bounds_flat;
  int bounds_line = 0;

  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("malformed section header", line, lineno);
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section))
        throw ParseError("unknown section [" + section + "]", section, lineno);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", line, lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ParseError("key outside any section", key, lineno);
    if (!kKeys.at(section).count(key))
      throw ParseError("unknown key", section + "." + key, lineno);
    const std::string full = section + "." + key;
    if (cfg.present.count(full))
      throw ParseError("duplicate key", full, lineno);
    cfg.present.insert(full);
    key_line[full] = lineno;

    if (full == "frame.name") {
      cfg.frame_name = value;
    } else if (full == "frame.file") {
      cfg.frame_file = value;
    } else if (full == "domain.type") {
      if (value != "box" && value != "disk")
        throw ParseError("domain type must be box or disk", full, lineno);
      domain_type = value;
    } else if (full == "domain.bounds") {
      for (const auto& t : tokens(value))
        bounds_flat.push_back(parse_real(t, full, lineno));
      bounds_line = lineno;
    } else if (full == "domain.center") {
      cfg.domain.center.clear();
      for (const auto& t : tokens(value))
        cfg.domain.center.push_back(parse_real(t, full, lineno));
    } else if (full == "domain.radius") {
      cfg.domain.radius = parse_real(value, full, lineno);
    } else if (full == "grid.resolution") {
      cfg.resolution.clear();
      for (const auto& t : tokens(value)) {
        const long r = parse_int(t, full, lineno);
        if (r < 4)
          throw ParseError("resolution must be >= 4", full, lineno);
        cfg.resolution.push_back(static_cast<int>(r));
      }
    } else if (full == "solver.p") {
      cfg.solver.p = parse_real(value, full, lineno);
      if (!(cfg.solver.p > 1.0))
        throw ParseError("p must exceed 1", full, lineno);
    } else if (full == "solver.p_list") {
      cfg.p_list = parse_real_list(value, full, lineno);
      for (const double p : cfg.p_list)
        if (!(p > 1.0))
          throw ParseError("every p in p_list must exceed 1", full, lineno);
    } else if (full == "solver.tol_rel") {
      cfg.solver.tol_rel = parse_real(value, full, lineno);
      if (!(cfg.solver.tol_rel > 0.0))
        throw ParseError("tol_rel must be positive", full, lineno);
    } else if (full == "solver.tol_res") {
      cfg.solver.tol_res = parse_real(value, full, lineno);
      if (!(cfg.solver.tol_res > 0.0))
        throw ParseError("tol_res must be positive", full, lineno);
    } else if (full == "solver.max_iter") {
      const long v = parse_int(value, full, lineno);
      if (v < 1) throw ParseError("max_iter must be >= 1", full, lineno);
      cfg.solver.max_iter = static_cast<int>(v);
    } else if (full == "solver.seed") {
      cfg.solver.seed = static_cast<std::uint64_t>(parse_int(value, full, lineno));
    } else if (full == "solver.n_inits") {
      const long v = parse_int(value, full, lineno);
      if (v < 1) throw ParseError("n_inits must be >= 1", full, lineno);
      cfg.solver.n_inits = static_cast<int>(v);
    } else if (full == "solver.init") {
      try {
        cfg.solver.init = init_from_string(value);
      } catch (const PreconditionError& e) {
        throw ParseError(e.what(), full, lineno);
      }
    } else if (full == "solver.step_init") {
      cfg.solver.step_init = parse_real(value, full, lineno);
      if (!(cfg.solver.step_init > 0.0))
        throw ParseError("step_init must be positive", full, lineno);
    } else if (full == "solver.step_shrink") {
      cfg.solver.step_shrink = parse_real(value, full, lineno);
      if (!(cfg.solver.step_shrink > 0.0) || cfg.solver.step_shrink >= 1.0)
        throw ParseError("step_shrink must lie in (0, 1)", full, lineno);
    } else if (full == "solver.step_c") {
      cfg.solver.step_c = parse_real(value, full, lineno);
      if (!(cfg.solver.step_c > 0.0))
        throw ParseError("step_c must be positive", full, lineno);
    } else if (full == "solver.stencil_radius") {
      const long v = parse_int(value, full, lineno);
      if (v < 1) throw ParseError("stencil_radius must be >= 1", full, lineno);
      cfg.stencil_radius = static_cast<int>(v);
    } else if (full == "solver.span_tol") {
      cfg.span_tol = parse_real(value, full, lineno);
      if (!(cfg.span_tol > 0.0))
        throw ParseError("span_tol must be positive", full, lineno);
    } else if (full == "solver.s_max") {
      const long v = parse_int(value, full, lineno);
      if (v < 1) throw ParseError("s_max must be >= 1", full, lineno);
      cfg.s_max = static_cast<int>(v);
    } else if (full == "solver.source") {
      cfg.source.clear();
      for (const auto& t : tokens(value))
        cfg.source.push_back(parse_real(t, full, lineno));
    } else if (full == "solver.suite") {
      cfg.suite = value;
    } else if (full == "solver.verify_samples") {
      const long v = parse_int(value, full, lineno);
      if (v < 1) throw ParseError("verify_samples must be >= 1", full, lineno);
      cfg.verify_samples = static_cast<int>(v);
    } else if (full == "solver.verify_fields") {
      const long v = parse_int(value, full, lineno);
      if (v < 1) throw ParseError("verify_fields must be >= 1", full, lineno);
      cfg.verify_fields = static_cast<int>(v);
    } else if (full == "solver.verify_inits") {
      const long v = parse_int(value, full, lineno);
      if (v < 2) throw ParseError("verify_inits must be >= 2", full, lineno);
      cfg.verify_inits = static_cast<int>(v);
    } else if (full == "output.dir") {
      cfg.output_dir = value;
    }
  }

  // Assemble and validate the domain.
  if (bounds_flat.empty())
    throw ParseError("missing required key", "domain.bounds", 0);
  if (bounds_flat.size() % 2 != 0)
    throw ParseError("bounds need one (low, high) pair per axis",
                     "domain.bounds", bounds_line);
  cfg.domain.bounds.clear();
  for (std::size_t k = 0; k + 1 < bounds_flat.size(); k += 2) {
    if (!(bounds_flat[k] < bounds_flat[k + 1]))
      throw ParseError("bounds must satisfy low < high", "domain.bounds",
                       bounds_line);
    cfg.domain.bounds.emplace_back(bounds_flat[k], bounds_flat[k + 1]);
  }
  cfg.domain.type =
      domain_type == "disk" ? DomainSpec::Type::disk : DomainSpec::Type::box;
  const std::size_t dim = cfg.domain.bounds.size();
  if (cfg.domain.type == DomainSpec::Type::disk) {
    if (cfg.domain.center.empty())
      cfg.domain.center.assign(dim, 0.0);
    if (cfg.domain.center.size() != dim)
      throw ParseError("disk center dimension mismatch", "domain.center",
                       key_line.count("domain.center")
                           ? key_line.at("domain.center")
                           : 0);
    if (!(cfg.domain.radius > 0.0))
      throw ParseError("disk needs a positive radius", "domain.radius",
                       key_line.count("domain.radius")
                           ? key_line.at("domain.radius")
                           : 0);
  }

  if (cfg.resolution.empty())
    throw ParseError("missing required key", "grid.resolution", 0);
  if (cfg.resolution.size() == 1)
    cfg.resolution.assign(dim, cfg.resolution.front());
  if (cfg.resolution.size() != dim)
    throw ParseError("resolution dimension mismatch", "grid.resolution",
                     key_line.at("grid.resolution"));

  // Frame/domain dimension consistency.
  if (cfg.frame_file.empty()) {
    if (cfg.frame_name == "grushin" && dim != 2)
      throw DimensionError("frame 'grushin' needs 2 axes, got " +
                           std::to_string(dim));
    if (cfg.frame_name == "heisenberg" && dim != 3)
      throw DimensionError("frame 'heisenberg' needs 3 axes, got " +
                           std::to_string(dim));
    if (cfg.frame_name != "euclidean" && cfg.frame_name != "grushin" &&
        cfg.frame_name != "heisenberg")
      throw ParseError("unknown built-in frame '" + cfg.frame_name + "'",
                       "frame.name",
                       key_line.count("frame.name") ? key_line.at("frame.name")
                                                    : 0);
  }
  if (!cfg.source.empty() && cfg.source.size() != dim)
    throw ParseError("source point dimension mismatch", "solver.source",
                     key_line.at("solver.source"));

  cfg.solver.validate();
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string RunConfig::canonical_text() const {
  std::ostringstream os;
  os << "[frame]\n";
  if (frame_file.empty())
    os << "name = " << frame_name << "\n";
  else
    os << "file = " << frame_file << "\n";
  os << "[domain]\n";
  os << "type = " << (domain.type == DomainSpec::Type::disk ? "disk" : "box")
     << "\n";
  os << "bounds =";
  for (const auto& [lo, hi] : domain.bounds)
    os << " " << format_double(lo) << " " << format_double(hi);
  os << "\n";
  if (domain.type == DomainSpec::Type::disk) {
    os << "center =";
    for (const double c : domain.center) os << " " << format_double(c);
    os << "\nradius = " << format_double(domain.radius) << "\n";
  }
  os << "[grid]\n";
  os << "resolution =";
  for (const int r : resolution) os << " " << r;
  os << "\n";
  os << "[solver]\n";
  os << "p = " << format_double(solver.p) << "\n";
  if (!p_list.empty()) {
    os << "p_list =";
    for (const double p : p_list) os << " " << format_double(p);
    os << "\n";
  }
  os << "tol_rel = " << format_double(solver.tol_rel) << "\n";
  os << "tol_res = " << format_double(solver.tol_res) << "\n";
  os << "max_iter = " << solver.max_iter << "\n";
  os << "seed = " << solver.seed << "\n";
  os << "n_inits = " << solver.n_inits << "\n";
  os << "init = " << to_string(solver.init) << "\n";
  os << "step_init = " << format_double(solver.step_init) << "\n";
  os << "step_shrink = " << format_double(solver.step_shrink) << "\n";
  os << "step_c = " << format_double(solver.step_c) << "\n";
  os << "stencil_radius = " << stencil_radius << "\n";
  os << "span_tol = " << format_double(span_tol) << "\n";
  os << "s_max = " << s_max << "\n";
  if (!source.empty()) {
    os << "source =";
    for (const double c : source) os << " " << format_double(c);
    os << "\n";
  }
  os << "suite = " << suite << "\n";
  os << "verify_samples = " << verify_samples << "\n";
  os << "verify_fields = " << verify_fields << "\n";
  os << "verify_inits = " << verify_inits << "\n";
  os << "[output]\n";
  os << "dir = " << output_dir << "\n";
  return os.str();
}

std::string RunConfig::config_hash() const {
  return hash_hex(fnv1a_hash(canonical_text()));
}

VectorFieldFrame make_frame(const RunConfig& cfg) {
  if (!cfg.frame_file.empty()) {
    VectorFieldFrame f = VectorFieldFrame::from_file(cfg.frame_file);
    if (f.n != cfg.domain.bounds.size())
      throw DimensionError("custom frame has n = " + std::to_string(f.n) +
                           " but the domain has " +
                           std::to_string(cfg.domain.bounds.size()) + " axes");
    return f;
  }
  return VectorFieldFrame::builtin(cfg.frame_name, cfg.domain.bounds.size());
}

GridPtr make_grid(const RunConfig& cfg) {
  return build_grid(cfg.domain, cfg.resolution);
}

}  // namespace sublap
