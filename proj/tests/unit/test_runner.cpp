#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sublap/config.hpp"
#include "sublap/errors.hpp"
#include "sublap/runner.hpp"

using namespace sublap;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunConfig small_config(const std::string& solver_keys,
                       const fs::path& out_dir) {
  std::string text =
      "[frame]\nname = euclidean\n"
      "[domain]\nbounds = 0 1 0 1\n"
      "[grid]\nresolution = 17\n"
      "[solver]\n" +
      (solver_keys.empty() ? std::string("p = 2\n") : solver_keys) +
      "[output]\ndir = " + out_dir.string() + "\n";
  return parse_config(text);
}

fs::path fresh_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "sublap_runner" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("solve command writes the result row and the field file") {
  const fs::path dir = fresh_dir("solve");
  const RunConfig cfg = small_config("", dir);
  std::ostringstream out, err;
  const int code = run_command(Command::solve, cfg, out, err);
  CHECK(code == kExitOk);
  CHECK(fs::exists(dir / "result.csv"));
  CHECK(fs::exists(dir / "u1.field"));
  CHECK(out.str().find("lambda1") != std::string::npos);
  CHECK(out.str().find("# effective config") != std::string::npos);

  SUBCASE("same config, same seed, byte-identical artifacts") {
    const std::string first_result = slurp(dir / "result.csv");
    const std::string first_field = slurp(dir / "u1.field");
    std::ostringstream out2, err2;
    CHECK(run_command(Command::solve, cfg, out2, err2) == kExitOk);
    CHECK(slurp(dir / "result.csv") == first_result);
    CHECK(slurp(dir / "u1.field") == first_field);
  }
}

TEST_CASE("dimension command reports the homogeneous dimension") {
  const fs::path dir = fresh_dir("dimension");
  const RunConfig cfg = parse_config(
      "[frame]\nname = grushin\n[domain]\nbounds = -1 1 -1 1\n"
      "[grid]\nresolution = 33\n[output]\ndir = " +
      dir.string() + "\n");
  std::ostringstream out, err;
  CHECK(run_command(Command::dimension, cfg, out, err) == kExitOk);
  CHECK(out.str().find("Q = 3") != std::string::npos);
  CHECK(fs::exists(dir / "pointwise_q.csv"));
}

TEST_CASE("sweep emits one row per p") {
  const fs::path dir = fresh_dir("sweep");
  const RunConfig cfg = parse_config(
      "[frame]\nname = euclidean\n[domain]\nbounds = 0 1\n"
      "[grid]\nresolution = 65\n"
      "[solver]\np_list = 1.5:3.0:0.5\ntol_res = 0.05\nmax_iter = 200000\n"
      "[output]\ndir = " +
      dir.string() + "\n");
  std::ostringstream out, err;
  CHECK(run_command(Command::sweep, cfg, out, err) == kExitOk);
  const std::string csv = slurp(dir / "sweep.csv");
  int data_rows = 0;
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#' && line[0] != 'p') ++data_rows;
  CHECK(data_rows == 4);
}

TEST_CASE("distance command writes the table and validates the source") {
  const fs::path dir = fresh_dir("distance");
  SUBCASE("default source is the domain center") {
    const RunConfig cfg = small_config("", dir);
    std::ostringstream out, err;
    CHECK(run_command(Command::distance, cfg, out, err) == kExitOk);
    CHECK(fs::exists(dir / "distance.csv"));
  }
  SUBCASE("an exterior source exits with the usage code") {
    const RunConfig cfg = parse_config(
        "[frame]\nname = euclidean\n"
        "[domain]\ntype = disk\nbounds = 0 1 0 1\ncenter = 0.5 "
        "0.5\nradius = 0.4\n"
        "[grid]\nresolution = 17\n"
        "[solver]\nsource = 0.02 0.02\n"
        "[output]\ndir = " +
        dir.string() + "\n");
    std::ostringstream out, err;
    CHECK(run_command(Command::distance, cfg, out, err) == kExitUsage);
    CHECK(err.str().find("source") != std::string::npos);
  }
}

TEST_CASE("verify command runs the whole suite on a small grid") {
  const fs::path dir = fresh_dir("verify");
  const RunConfig cfg = small_config(
      "verify_samples = 4000\nverify_fields = 20\nverify_inits = "
      "2\ntol_res = 1e-5\nmax_iter = 100000\nseed = 3\n",
      dir);
  std::ostringstream out, err;
  const int code = run_command(Command::verify, cfg, out, err);
  INFO(out.str());
  CHECK(code == kExitOk);
  CHECK(fs::exists(dir / "checks.csv"));
  const std::string csv = slurp(dir / "checks.csv");
  for (const char* required :
       {"convexity_p2_m2", "positivity", "sign_change_absent",
        "sign_change_present", "poincare", "simplicity", "harnack",
        "harnack_refinement", "holder", "holder_refinement", "lattice",
        "lattice_refinement", "domain_monotonicity"}) {
    INFO(required);
    CHECK(csv.find(required) != std::string::npos);
  }
  CHECK(csv.find("fail") == std::string::npos);
}

TEST_CASE("solver non-convergence maps to exit code 3") {
  const fs::path dir = fresh_dir("noconv");
  const RunConfig cfg = small_config(
      "p = 3\nmax_iter = 2\ntol_rel = 1e-16\ntol_res = 1e-16\n", dir);
  std::ostringstream out, err;
  CHECK(run_command(Command::solve, cfg, out, err) == kExitNoConvergence);
  CHECK(err.str().find("trajectory") != std::string::npos);
}

TEST_CASE("command-irrelevant keys warn but do not fail") {
  const fs::path dir = fresh_dir("warn");
  const RunConfig cfg = small_config("p_list = 2 3\n", dir);
  std::ostringstream out, err;
  CHECK(run_command(Command::solve, cfg, out, err) == kExitOk);
  CHECK(err.str().find("ignored") != std::string::npos);
}

TEST_CASE("command names parse") {
  CHECK(command_from_string("solve") == Command::solve);
  CHECK(command_from_string("verify") == Command::verify);
  CHECK_THROWS_AS(command_from_string("explode"), PreconditionError);
}

TEST_CASE("unknown verify suites are usage errors") {
  const fs::path dir = fresh_dir("badsuite");
  const RunConfig cfg = small_config("suite = positivty\n", dir);
  std::ostringstream out, err;
  CHECK(run_command(Command::verify, cfg, out, err) == kExitUsage);
  CHECK(err.str().find("positivty") != std::string::npos);
}

TEST_CASE("single-suite verify runs just that family") {
  const fs::path dir = fresh_dir("onesuite");
  const RunConfig cfg =
      small_config("suite = convexity\nverify_samples = 2000\n", dir);
  std::ostringstream out, err;
  CHECK(run_command(Command::verify, cfg, out, err) == kExitOk);
  const std::string csv = slurp(dir / "checks.csv");
  CHECK(csv.find("convexity_p2_m2") != std::string::npos);
  CHECK(csv.find("positivity") == std::string::npos);
}
