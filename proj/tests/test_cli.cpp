#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "pidlab/info.hpp"
#include "pidlab/io.hpp"

using namespace pidlab;
using Json = nlohmann::json;

namespace {

const std::string kCli = PIDLAB_CLI_PATH;

int run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " \"" + kCli + "\" " + args + " > /dev/null 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void put(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

Json load(const std::string& path) { return Json::parse(read_text(path)); }

double value(const Json& report, const std::string& measure, const std::string& component) {
  for (const auto& r : report["results"]) {
    if (r["measure"] == measure) return r["values"][component]["value"].get<double>();
  }
  FAIL("measure missing from report");
  return NAN;
}

const char* kAnd = R"({"variables": ["S","Y","Z"],
  "alphabets": {"S": ["0","1"], "Y": ["0","1"], "Z": ["0","1"]},
  "entries": [[["0","0","0"], "1/4"], [["0","0","1"], "1/4"], [["0","1","0"], "1/4"], [["1","1","1"], "1/4"]]})";

}  // namespace

TEST_CASE("family then compute") {
  REQUIRE(run("family --name xor --out xor.json") == 0);
  const Json f = load("xor.json");
  CHECK(f["entries"].size() == 4);
  REQUIRE(run("compute --input xor.json --measures mmi,broja --out xor_report.json") == 0);
  const Json r = load("xor_report.json");
  for (const char* m : {"mmi", "broja"}) {
    CHECK(std::abs(value(r, m, "si")) <= 1e-9);
    CHECK(std::abs(value(r, m, "ci") - 1.0) <= 1e-9);
  }
}

TEST_CASE("and gate through broja") {
  put("and.json", kAnd);
  REQUIRE(run("compute --input and.json --measures broja --out and_report.json") == 0);
  const Json r = load("and_report.json");
  const double h = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
  CHECK(std::abs(value(r, "broja", "ui_y")) <= 1e-4);
  CHECK(std::abs(value(r, "broja", "ui_z")) <= 1e-4);
  CHECK(std::abs(value(r, "broja", "si") - (h - 0.5)) <= 1e-4);
  CHECK(std::abs(value(r, "broja", "ci") - 0.5) <= 1e-4);
  CHECK(r["input_digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("red family table") {
  REQUIRE(run("family --name red-discontinuity --param a=0.5 --out red.json") == 0);
  const JointDist sy = marginal(read_dist_file("red.json"), {"S", "Y"});
  const double table[6] = {0.0, 0.25, 0.25, 0.25, 0.25, 0.0};
  for (std::size_t i = 0; i < 6; ++i) CHECK(sy[i] == table[i]);
}

TEST_CASE("round trip equals the in-process computation bitwise") {
  REQUIRE(run("family --name dirichlet-random --param seed=7 --param shape=3x2x3 --out d7.json") == 0);
  REQUIRE(run("family --name dirichlet-random --param seed=7 --param shape=3x2x3 --out d7b.json") == 0);
  CHECK(read_text("d7.json") == read_text("d7b.json"));
  const JointDist g = generate(DirichletRandom{{3, 2, 3}, 1.0, 7});
  CHECK(read_dist_file("d7.json").mass() == g.mass());

  REQUIRE(run("compute --input d7.json --out d7_report.json") == 0);
  REQUIRE(run("compute --input d7.json --out d7_report_b.json") == 0);
  CHECK(read_text("d7_report.json") == read_text("d7_report_b.json"));

  const std::string text = read_text("d7.json");
  char digest[32];
  std::snprintf(digest, sizeof digest, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  std::vector<PidResult> results;
  for (auto id : catalogue()) results.push_back(compute_measure(id, g));
  CHECK(read_text("d7_report.json") == compute_report({digest, {}}, "S", {"Y", "Z"}, g, results));
}

TEST_CASE("roles") {
  REQUIRE(run("family --name dirichlet-random --param shape=2x2x2x2 --param seed=3 --out four.json") == 0);
  CHECK(run("compute --input four.json --target U --sources Y,Z --measures mmi --out four_report.json") == 0);
  const Json r = load("four_report.json");
  CHECK(r["roles"]["target"] == "U");
  const JointDist p = apply_roles(read_dist_file("four.json"), "U", {"Y", "Z"});
  CHECK(value(r, "mmi", "si") ==
        std::min(mutual_information(p, {"U"}, {"Y"}), mutual_information(p, {"U"}, {"Z"})));
  CHECK(run("compute --input four.json --target S --sources Y,W") == 2);
}

TEST_CASE("exit codes") {
  put("bad.json", "{not json");
  put("short.json", R"({"variables": ["S","Y","Z"], "alphabets": {"S": ["0","1"], "Y": ["0"], "Z": ["0"]},
                        "entries": [[["0","0","0"], "1/2"]]})");
  put("sparse.json", kAnd);
  CHECK(run("") == 1);
  CHECK(run("compute") == 1);
  CHECK(run("verify --suite nope") == 1);
  CHECK(run("compute --input bad.json") == 2);
  CHECK(run("compute --input missing_file.json") == 2);
  CHECK(run("compute --input sparse.json", "PIDLAB_TOL=abc") == 2);
  CHECK(run("compute --input short.json") == 3);
  CHECK(run("compute --input sparse.json --measures ig") == 3);
  CHECK(run("compute --input sparse.json --measures nope") == 3);
  CHECK(run("family --name red-discontinuity --param a=2") == 3);
  CHECK(run("ui-construction --input sparse.json --delta-y 5 --delta-z 0") == 3);
  REQUIRE(run("family --name dirichlet-random --param shape=3x3x3 --param seed=4 --out r3.json") == 0);
  CHECK(run("compute --input r3.json --measures dep --out tight.json", "PIDLAB_TOL=1e-300") == 4);
  CHECK(run("verify --suite mmi-bound --trials 5 --seed 1 --out v.json") == 0);
  CHECK(load("v.json")["passed"] == true);
}

TEST_CASE("ui-construction") {
  put("and_u.json", kAnd);
  REQUIRE(run("ui-construction --input and_u.json --delta-y 0 --delta-z 0 --out u.json") == 0);
  const Json r = load("u.json");
  const double h = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
  CHECK(std::abs(value(r, "ui_construction", "si") - (h - 0.5)) <= 1e-12);
  CHECK(std::abs(r["results"][0]["residuals"]["y"]["value"].get<double>()) <= 1e-9);
}

TEST_CASE("verify determinism across thread counts") {
  REQUIRE(run("verify --suite locking --trials 6 --seed 2 --out l1.json") == 0);
  REQUIRE(run("verify --suite locking --trials 6 --seed 2 --serial --out l2.json") == 0);
  CHECK(read_text("l1.json") == read_text("l2.json"));
}
