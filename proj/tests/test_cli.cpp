#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "chgeo/verify.hpp"

using json = nlohmann::json;
using namespace chgeo;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/chgeo_cli_out.txt";
  const std::string cmd =
      std::string(CHGEO_CLI_PATH) + " " + args + " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out_path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

}  // namespace

TEST_CASE("verify passes on the d=1 hyperbolic case and emits valid json") {
  const RunResult r = run_cli("verify --domain ball:d=1 --mu 1.0 --seed 7");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["summary"]["all_passed"] == true);
  CHECK(j["checks"].size() == 11);
  for (const auto& c : j["checks"]) {
    CHECK(c["pass"] == true);
    CHECK(c["residual"].get<double>() < c["tolerance"].get<double>());
  }
}

TEST_CASE("verify passes on the Einstein type-I case") {
  const RunResult r = run_cli("verify --domain typeI:p=2,q=2 --mu 0.8");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["summary"]["all_passed"] == true);
}

TEST_CASE("verify exits 2 on invalid input") {
  CHECK(run_cli("verify --domain ball:d=0 --mu 1").exit_code == 2);
  CHECK(run_cli("verify --domain ball:d=2 --mu -0.5").exit_code == 2);
  CHECK(run_cli("verify --domain nope --mu 1").exit_code == 2);
  CHECK(run_cli("verify --mu 1").exit_code == 2);
}

TEST_CASE("verify exits 1 when a tolerance override forces a failure") {
  const RunResult r = run_cli("verify --domain ball:d=1 --mu 1.0 --tol-det_ratio 1e-30");
  CHECK(r.exit_code == 1);
  const json j = json::parse(r.out);
  CHECK(j["summary"]["all_passed"] == false);
  bool found = false;
  for (const auto& c : j["checks"])
    if (c["name"] == "det_ratio") {
      found = true;
      CHECK(c["pass"] == false);
      CHECK(c["tolerance"].get<double>() == 1e-30);
    }
  CHECK(found);
}

TEST_CASE("verify rejects unknown tolerance names") {
  CHECK(run_cli("verify --domain ball:d=1 --mu 1.0 --tol-nonsense 1e-9").exit_code == 2);
}

TEST_CASE("report emits the expected quantities at the origin of the d=1 ball") {
  const RunResult r = run_cli("report --domain ball:d=1 --mu 1.0 --point 0:0,0:0");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["kappa"].get<double>() == doctest::Approx(-6.0).epsilon(1e-12));
  CHECK(j["a2"].get<double>() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(j["extremal_residual"].get<double>() < 1e-8);
}

TEST_CASE("report on the mu=2 fiber point matches the worked values") {
  const RunResult r = run_cli("report --domain ball:d=1 --mu 2.0 --point 0:0,0.5:0");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["kappa"].get<double>() == doctest::Approx(-5.25).epsilon(1e-12));
  CHECK(j["a2"].get<double>() == doctest::Approx(1.25).epsilon(1e-10));
}

TEST_CASE("report exits 2 outside the domain, naming the membership constraint") {
  const std::string out_path = "/tmp/chgeo_cli_err.txt";
  const std::string cmd = std::string(CHGEO_CLI_PATH) +
                          " report --domain ball:d=1 --mu 2.0 --point 0:0,1.1:0 2> " + out_path;
  const int status = std::system((cmd + " > /dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 2);
  std::ifstream f(out_path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().find("|w|^2 < N(z,z)^mu") != std::string::npos);
}

TEST_CASE("report validates the point arity") {
  CHECK(run_cli("report --domain ball:d=2 --mu 1.0 --point 0:0,0:0").exit_code == 2);
  CHECK(run_cli("report --domain ball:d=1 --mu 1.0 --point 0:0,abc").exit_code == 2);
}

TEST_CASE("sweep: csv header, row count and the Einstein row") {
  const RunResult r = run_cli("sweep --domain ball:d=2 --mu-min 0.6 --mu-max 1.4 --steps 9");
  CHECK(r.exit_code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "mu,kappa_origin,extremal_residual,a2_defect,einstein_deviation");
  int rows = 0;
  bool ke_row_clean = false;
  for (std::string line; std::getline(lines, line);) {
    if (line.empty()) continue;
    ++rows;
    std::istringstream cells(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 5);
    if (std::abs(v[0] - 1.0) < 1e-12) {
      ke_row_clean = v[2] < 1e-8 && std::abs(v[3]) < 1e-7;
    } else {
      CHECK(v[2] > 1e-4);
      CHECK(std::abs(v[3]) > 1e-4);
    }
  }
  CHECK(rows == 9);
  CHECK(ke_row_clean);
}

TEST_CASE("sweep: exactly two rows for steps=2 and range validation") {
  const RunResult r = run_cli("sweep --domain ball:d=1 --mu-min 0.9 --mu-max 1.1 --steps 2");
  CHECK(r.exit_code == 0);
  int lines = 0;
  for (char ch : r.out)
    if (ch == '\n') ++lines;
  CHECK(lines == 3);  // header + 2 rows
  CHECK(run_cli("sweep --domain ball:d=1 --mu-min 1.1 --mu-max 0.9 --steps 5").exit_code == 2);
  CHECK(run_cli("sweep --domain ball:d=1 --mu-min 0.5 --mu-max 1.0 --steps 1").exit_code == 2);
}

TEST_CASE("sweep locates the type-I deviation minimum at mu = 0.8") {
  const RunResult r =
      run_cli("sweep --domain typeI:p=2,q=2 --mu-min 0.6 --mu-max 1.0 --steps 5 --format json");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 5);
  double best_mu = 0.0, best = 1e300;
  for (const auto& row : j["rows"]) {
    const double dev = row["einstein_deviation"].get<double>();
    if (dev < best) {
      best = dev;
      best_mu = row["mu"].get<double>();
    }
  }
  CHECK(best_mu == doctest::Approx(0.8));
}

TEST_CASE("sweep json format carries the same rows") {
  const RunResult r =
      run_cli("sweep --domain ball:d=1 --mu-min 0.9 --mu-max 1.1 --steps 3 --format json");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["rows"].size() == 3);
  CHECK(j["rows"][1]["mu"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("explore: hyperbolic spread is tiny, output is byte-deterministic") {
  const RunResult a = run_cli("explore --domain ball:d=2 --grid 12 --seed 1");
  CHECK(a.exit_code == 0);
  const json j = json::parse(a.out);
  CHECK(j["mu"].get<double>() == doctest::Approx(1.0));
  CHECK(j["spread"].get<double>() < 1e-8);
  CHECK(j["a2_values"].size() == 12);

  const RunResult b = run_cli("explore --domain ball:d=2 --grid 12 --seed 1");
  CHECK(a.out == b.out);
  const RunResult c = run_cli("explore --domain ball:d=2 --grid 12 --seed 2");
  CHECK(a.out != c.out);
}

TEST_CASE("verify output is byte-deterministic for a fixed seed") {
  const RunResult a = run_cli("verify --domain ball:d=1 --mu 1.1 --seed 5");
  const RunResult b = run_cli("verify --domain ball:d=1 --mu 1.1 --seed 5");
  CHECK(a.out == b.out);
}

TEST_CASE("json numbers round-trip losslessly through parse and reformat") {
  const RunResult r = run_cli("verify --domain ball:d=1 --mu 1.3 --seed 9");
  const json j = json::parse(r.out);
  for (const auto& c : j["checks"]) {
    const double v = c["residual"].get<double>();
    const std::string formatted = fmt_double(v);
    CHECK(std::stod(formatted) == v);
  }
}

TEST_CASE("--out writes the payload to a file") {
  const std::string path = "/tmp/chgeo_out_test.json";
  std::remove(path.c_str());
  const RunResult r =
      run_cli("explore --domain ball:d=1 --grid 4 --seed 3 --out " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  REQUIRE(f.good());
  json j;
  f >> j;
  CHECK(j["grid"] == 4);
}
