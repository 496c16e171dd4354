#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "sublap/config.hpp"
#include "sublap/errors.hpp"
#include "sublap/io.hpp"

using namespace sublap;

namespace {

const char* kMinimal =
    "[frame]\n"
    "name = euclidean\n"
    "[domain]\n"
    "bounds = 0 1 0 1\n"
    "[grid]\n"
    "resolution = 64\n"
    "[solver]\n"
    "p = 2\n";

}  // namespace

TEST_CASE("minimal config fills the documented defaults") {
  const RunConfig cfg = parse_config(kMinimal);
  CHECK(cfg.frame_name == "euclidean");
  CHECK(cfg.domain.bounds.size() == 2);
  CHECK(cfg.resolution == std::vector<int>{64, 64});
  CHECK(cfg.solver.p == 2.0);
  CHECK(cfg.solver.tol_rel == 1e-10);
  CHECK(cfg.solver.max_iter == 10000);
  CHECK(cfg.solver.init == SolverConfig::Init::positive_bump);
  CHECK(cfg.stencil_radius == 2);
  CHECK(cfg.output_dir == "out");
}

TEST_CASE("config validation errors name key and line") {
  SUBCASE("out-of-range p") {
    try {
      parse_config(
          "[domain]\nbounds = 0 1\n[grid]\nresolution = 8\n[solver]\np = "
          "0.5\n");
      FAIL("expected range error");
    } catch (const ParseError& e) {
      CHECK(e.key() == "solver.p");
      CHECK(e.line() == 6);
    }
  }
  SUBCASE("unknown key") {
    try {
      parse_config("[solver]\nwibble = 3\n");
      FAIL("expected unknown-key error");
    } catch (const ParseError& e) {
      CHECK(e.key() == "solver.wibble");
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("unknown section") {
    CHECK_THROWS_AS(parse_config("[quantum]\nfoo = 1\n"), ParseError);
  }
  SUBCASE("duplicate key") {
    CHECK_THROWS_AS(
        parse_config("[solver]\np = 2\np = 3\n[domain]\nbounds = 0 "
                     "1\n[grid]\nresolution = 8\n"),
        ParseError);
  }
  SUBCASE("type mismatch") {
    CHECK_THROWS_AS(
        parse_config("[grid]\nresolution = abc\n[domain]\nbounds = 0 1\n"),
        ParseError);
  }
  SUBCASE("missing required keys") {
    CHECK_THROWS_AS(parse_config("[solver]\np = 2\n"), ParseError);
  }
  SUBCASE("frame/domain dimension mismatch") {
    CHECK_THROWS_AS(parse_config("[frame]\nname = heisenberg\n[domain]\n"
                                 "bounds = 0 1 0 1\n[grid]\nresolution = 8\n"),
                    DimensionError);
    CHECK_THROWS_AS(parse_config("[frame]\nname = grushin\n[domain]\n"
                                 "bounds = 0 1\n[grid]\nresolution = 8\n"),
                    DimensionError);
  }
  SUBCASE("resolution below 4") {
    CHECK_THROWS_AS(
        parse_config("[domain]\nbounds = 0 1\n[grid]\nresolution = 3\n"),
        ParseError);
  }
}

TEST_CASE("p list ranges expand inclusively") {
  const RunConfig cfg = parse_config(
      "[domain]\nbounds = 0 1\n[grid]\nresolution = 8\n"
      "[solver]\np_list = 1.5:3.0:0.5\n");
  REQUIRE(cfg.p_list.size() == 4);
  CHECK(cfg.p_list[0] == doctest::Approx(1.5));
  CHECK(cfg.p_list[3] == doctest::Approx(3.0));
}

TEST_CASE("canonical text is a fixed point of parsing") {
  const RunConfig cfg = parse_config(kMinimal);
  const std::string canon = cfg.canonical_text();
  const RunConfig reparsed = parse_config(canon);
  CHECK(reparsed.canonical_text() == canon);
  CHECK(reparsed.config_hash() == cfg.config_hash());
  CHECK(cfg.config_hash().size() == 16);
}

TEST_CASE("full-precision decimal formatting round-trips") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> dist(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = dist(rng) * std::pow(10.0, int(i % 17) - 8);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("field files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sublap_io_test";
  fs::create_directories(dir);
  auto grid = build_grid(DomainSpec::box({{0.0, 1.0}, {0.0, 1.0}}), {5});

  SUBCASE("zero field on the 3x3 interior writes 9 zero rows") {
    const fs::path path = dir / "zero.csv";
    write_field(ScalarField(grid), path, "test");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line.substr(0, 1) == "#");
    std::getline(in, line);
    CHECK(line == "x1,x2,value");
    int rows = 0;
    while (std::getline(in, line)) {
      CHECK(line.substr(line.find_last_of(',') + 1) == "0");
      ++rows;
    }
    CHECK(rows == 9);
  }

  SUBCASE("write then read reproduces values exactly") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> dist;
    ScalarField u(grid);
    for (double& v : u.values()) v = dist(rng) * 1e-3;
    const fs::path path = dir / "roundtrip.csv";
    write_field(u, path, "test");
    const ScalarField back = read_field(grid, path);
    CHECK(back.values() == u.values());
  }

  SUBCASE("row count mismatches are io errors") {
    const fs::path path = dir / "short.csv";
    {
      std::ofstream out(path);
      out << "# junk\nx1,x2,value\n0,0,1\n";
    }
    CHECK_THROWS_AS(read_field(grid, path), IoError);
  }
}

TEST_CASE("csv writers stamp the header comment") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sublap_io_test";
  fs::create_directories(dir);

  SUBCASE("check reports carry the three-way verdict") {
    std::vector<CheckReport> reps(2);
    reps[0] = {"alpha", Verdict::pass, 1.0, 2.0, ""};
    reps[1] = {"beta", Verdict::inconclusive, 0.5, 0.0, ""};
    const fs::path path = dir / "checks.csv";
    write_check_reports(reps, path, "sublap test");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# sublap test");
    std::getline(in, line);
    CHECK(line == "name,passed,statistic,threshold");
    std::getline(in, line);
    CHECK(line == "alpha,pass,1,2");
    std::getline(in, line);
    CHECK(line == "beta,inconclusive,0.5,0");
  }

  SUBCASE("distance tables render unreachable nodes as inf") {
    auto grid = build_grid(DomainSpec::box({{0.0, 1.0}}), {5});
    DistanceField df;
    df.grid = grid;
    df.source = 0;
    df.values = {0.0, kUnreachable, 0.5};
    const fs::path path = dir / "distance.csv";
    write_distance_table(df, path, "sublap test");
    std::ifstream in(path);
    std::string all((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    CHECK(all.find("x1,d") != std::string::npos);
    CHECK(all.find(",inf") != std::string::npos);
  }

  SUBCASE("result rows match the documented column order") {
    ResultRow row;
    row.p = 2.0;
    row.lambda1 = 19.7;
    row.poincare_constant = 1.0 / 19.7;
    row.residual = 1e-9;
    row.iterations = 12;
    row.resolution = "64x64";
    row.frame = "euclidean";
    row.omega = 0.95;
    row.q = 2;
    row.pstar = 4.0;
    CHECK(std::string(kResultHeader).starts_with("p,lambda1"));
    const std::string line = result_row_line(row);
    CHECK(line.find("64x64") != std::string::npos);
    CHECK(line.find("euclidean") != std::string::npos);
  }
}

TEST_CASE("fnv1a hash is stable") {
  CHECK(fnv1a_hash("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a_hash("a") != fnv1a_hash("b"));
  CHECK(hash_hex(0x0123456789abcdefULL) == "0123456789abcdef");
}
