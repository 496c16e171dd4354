#include "sublap/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sublap/errors.hpp"

namespace sublap {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  // Shortest representation that parses back exactly.
  for (int prec = 15; prec <= 17; ++prec) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    if (std::stod(os.str()) == v) return os.str();
  }
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::uint64_t fnv1a_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::string coord_header(std::size_t dim, std::string_view last) {
  std::string h;
  for (std::size_t k = 1; k <= dim; ++k) h += "x" + std::to_string(k) + ",";
  h += last;
  return h;
}

void write_table(const Grid& grid, std::span<const double> values,
                 const std::filesystem::path& path,
                 const std::string& header_comment, std::string_view column) {
  auto out = open_out(path);
  out << "# " << header_comment << "\n";
  out << coord_header(grid.dim(), column) << "\n";
  for (std::size_t i = 0; i < grid.interior_count(); ++i) {
    const auto x = grid.point_of_interior(i);
    for (const double c : x) out << format_double(c) << ",";
    out << format_double(values[i]) << "\n";
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void write_field(const ScalarField& u, const std::filesystem::path& path,
                 const std::string& header_comment,
                 std::string_view value_column) {
  write_table(u.grid(), u.values(), path, header_comment, value_column);
}

ScalarField read_field(const GridPtr& grid,
                       const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  ScalarField u(grid);
  std::string line;
  bool header_seen = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column header
      continue;
    }
    const auto last_comma = line.find_last_of(',');
    if (last_comma == std::string::npos)
      throw IoError("malformed field row in " + path.string());
    if (row >= u.size())
      throw IoError("too many rows in " + path.string());
    u[row] = std::stod(line.substr(last_comma + 1));
    ++row;
  }
  if (row != u.size())
    throw IoError("row count mismatch in " + path.string() + ": expected " +
                  std::to_string(u.size()) + ", got " + std::to_string(row));
  return u;
}

void write_distance_table(const DistanceField& df,
                          const std::filesystem::path& path,
                          const std::string& header_comment) {
  write_table(*df.grid, df.values, path, header_comment, "d");
}

void write_check_reports(std::span<const CheckReport> reports,
                         const std::filesystem::path& path,
                         const std::string& header_comment) {
  auto out = open_out(path);
  out << "# " << header_comment << "\n";
  out << "name,passed,statistic,threshold\n";
  for (const auto& r : reports) {
    out << r.name << "," << to_string(r.verdict) << ","
        << format_double(r.statistic) << "," << format_double(r.threshold)
        << "\n";
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::string result_row_line(const ResultRow& row) {
  std::ostringstream os;
  os << format_double(row.p) << "," << format_double(row.lambda1) << ","
     << format_double(row.poincare_constant) << ","
     << format_double(row.residual) << "," << row.iterations << ","
     << row.resolution << "," << row.frame << "," << format_double(row.omega)
     << "," << row.q << "," << format_double(row.pstar);
  return os.str();
}

void write_result_rows(std::span<const ResultRow> rows,
                       const std::filesystem::path& path,
                       const std::string& header_comment) {
  auto out = open_out(path);
  out << "# " << header_comment << "\n";
  out << kResultHeader << "\n";
  for (const auto& row : rows) out << result_row_line(row) << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace sublap
