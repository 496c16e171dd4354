#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "sublap/grid.hpp"
#include "sublap/metric.hpp"
#include "sublap/verify.hpp"

namespace sublap {

/// Shortest decimal that round-trips the double exactly.
std::string format_double(double v);

/// FNV-1a 64-bit, used for the effective-config hash stamped on every CSV.
std::uint64_t fnv1a_hash(std::string_view text);
std::string hash_hex(std::uint64_t h);

/// Field file: '#' comment lines, a "x1,...,xn,value" header, then one row
/// per interior node in lexicographic node order, full-precision decimals.
void write_field(const ScalarField& u, const std::filesystem::path& path,
                 const std::string& header_comment,
                 std::string_view value_column = "value");

/// Inverse of write_field on the same grid; values reproduced exactly.
ScalarField read_field(const GridPtr& grid, const std::filesystem::path& path);

/// Distance table: columns x1..xn,d; unreachable nodes print "inf".
void write_distance_table(const DistanceField& df,
                          const std::filesystem::path& path,
                          const std::string& header_comment);

/// One row per check: name,passed,statistic,threshold (passed is
/// pass/fail/inconclusive).
void write_check_reports(std::span<const CheckReport> reports,
                         const std::filesystem::path& path,
                         const std::string& header_comment);

/// One row of the solve/sweep result table.
struct ResultRow {
  double p = 0.0;
  double lambda1 = 0.0;
  double poincare_constant = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::string resolution;
  std::string frame;
  double omega = 0.0;  // |Ω|
  int q = 0;
  double pstar = 0.0;
};

inline constexpr const char* kResultHeader =
    "p,lambda1,poincare_constant,residual,iterations,resolution,frame,omega,Q,"
    "p_star";

std::string result_row_line(const ResultRow& row);

void write_result_rows(std::span<const ResultRow> rows,
                       const std::filesystem::path& path,
                       const std::string& header_comment);

}  // namespace sublap
