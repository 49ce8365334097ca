#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "condembed/io.hpp"

namespace {

const std::string cli = CONDEMBED_CLI_PATH;
const std::string data = CONDEMBED_DATA_DIR;

int run_cli(const std::string& args) {
  const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("condembed_test_" + name)).string();
}

}  // namespace

TEST_CASE("cli exit codes", "[cli]") {
  CHECK(run_cli("j1 --input " + data + "/identity3.csv") == 0);
  CHECK(run_cli("j1 --input " + data + "/zero_diag2.csv") == 3);
  CHECK(run_cli("j1 --input " + data + "/does_not_exist.csv") == 1);
  CHECK(run_cli("j1") == 1);  // missing required option
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("jlt --input " + data + "/zero_diag2.csv") == 3);
  CHECK(run_cli("check --input " + data + "/credit8.csv") == 0);
  // check reports the screens rather than failing on them
  CHECK(run_cli("check --input " + data + "/zero_diag2.csv") == 0);
  CHECK(run_cli("compare --input " + data + "/credit8.csv") == 0);
  // iteration budget too small to converge
  CHECK(run_cli("j1 --input " + data + "/credit8.csv --max-iter 2") == 2);
}

TEST_CASE("cli j1 csv output parses back as a generator", "[cli]") {
  const std::string out = temp_path("generator.csv");
  REQUIRE(run_cli("j1 --input " + data + "/credit8.csv --format csv --output " + out) == 0);
  const condembed::Matrix q = condembed::read_matrix_csv_file(out);
  REQUIRE(q.rows() == 8);
  CHECK(q(0, 0) == Catch::Approx(-0.1221).margin(2e-4));
  CHECK_NOTHROW(condembed::IntensityMatrix(q));
  std::remove(out.c_str());
}

TEST_CASE("cli j1 json output carries the pinned schema", "[cli]") {
  const std::string out = temp_path("report.json");
  REQUIRE(run_cli("j1 --input " + data + "/credit8.csv --format json --output " + out) == 0);
  std::ifstream in(out);
  REQUIRE(in.good());
  const nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j.contains("method"));
  CHECK(j.contains("generator"));
  CHECK(j.contains("theta"));
  CHECK(j.contains("iterations"));
  CHECK(j.contains("residual"));
  CHECK(j["contraction"].contains("K"));
  std::remove(out.c_str());
}

TEST_CASE("cli verify and simulate run end to end", "[cli]") {
  const std::string qfile = temp_path("three_state_q.csv");
  REQUIRE(run_cli("j1 --input " + data + "/three_state_p60.csv --format csv --output " + qfile) ==
          0);
  CHECK(run_cli("verify --input-p " + data + "/three_state_p60.csv --input-q " + qfile) == 0);
  CHECK(run_cli("simulate --input-q " + qfile + " --paths 5000 --seed 3") == 0);
  CHECK(run_cli("simulate --input-q " + qfile + " --paths 10 --seed 3") == 1);
  std::remove(qfile.c_str());
}
