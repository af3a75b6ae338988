#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hlskit/gh_distance.hpp"
#include "hlskit/serialization.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "hlskit_cli_tests";
  fs::create_directories(dir);
  return dir;
}

RunResult run_cli(const std::string& args) {
  auto dir = work_dir();
  auto out_file = dir / "stdout.txt";
  auto err_file = dir / "stderr.txt";
  std::string cmd = std::string(HLSKIT_BIN) + " " + args + " > " +
                    out_file.string() + " 2> " + err_file.string();
  int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

std::string fixture(const std::string& name) {
  return std::string(HLSKIT_FIXTURES) + "/" + name;
}

}  // namespace

TEST_CASE("cli: hls on the bundle fixture emits a valid strict metric") {
  auto result = run_cli("hls --input " + fixture("ibundle.json"));
  REQUIRE(result.exit_code == 0);
  auto j = hlskit::io::json::parse(result.out);
  auto h = hlskit::io::hls_from_json(j);
  CHECK(h.space.size() == 5);
  CHECK(hlskit::validate_metric(h.space, hlskit::MetricMode::Strict).ok());
  CHECK(hlskit::diameter(h.space) == doctest::Approx(1.0));
}

TEST_CASE("cli: identical runs are byte-identical") {
  auto first = run_cli("hls --input " + fixture("ibundle.json"));
  auto second = run_cli("hls --input " + fixture("ibundle.json"));
  REQUIRE(first.exit_code == 0);
  CHECK(first.out == second.out);

  auto est1 = run_cli("gh --input " + fixture("ibundle.json") +
                      " --input2 " + fixture("ibundle.json") +
                      " --net-size 5 --seed 3");
  auto est2 = run_cli("gh --input " + fixture("ibundle.json") +
                      " --input2 " + fixture("ibundle.json") +
                      " --net-size 5 --seed 3");
  CHECK(est1.out == est2.out);
}

TEST_CASE("cli: gh on fixture spaces matches the library oracle") {
  auto result = run_cli("gh --input " + fixture("space_a.json") +
                        " --input2 " + fixture("space_b.json"));
  REQUIRE(result.exit_code == 0);
  REQUIRE(result.out.rfind("exact ", 0) == 0);
  double printed = std::stod(result.out.substr(6));

  auto x = hlskit::io::space_from_json(
      hlskit::io::load_json_file(fixture("space_a.json")));
  auto y = hlskit::io::space_from_json(
      hlskit::io::load_json_file(fixture("space_b.json")));
  CHECK(printed == doctest::Approx(hlskit::gh_exact(x, y)).epsilon(1e-12));
}

TEST_CASE("cli: warp halves the tangential lengths") {
  auto result = run_cli("warp --input " + fixture("ibundle.json") +
                        " --warp " + fixture("warp_half.json"));
  REQUIRE(result.exit_code == 0);
  auto warped = hlskit::io::complex_from_json(
      hlskit::io::json::parse(result.out));
  for (const auto& e : warped.edges) {
    if (e.kind == hlskit::EdgeKind::Tangential)
      CHECK(e.length == doctest::Approx(0.125));
    else
      CHECK(e.length == doctest::Approx(0.25));
  }
}

TEST_CASE("cli: converge emits the declared csv header") {
  auto result = run_cli("converge --input " + fixture("ibundle.json") +
                        " --family const --ns 1,2");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.rfind(
            "n,gh_lower,gh_upper,method,density_radius,condition_holds\n",
            0) == 0);
  // header plus one row per index
  int lines = 0;
  for (char c : result.out)
    if (c == '\n') ++lines;
  CHECK(lines == 3);
}

TEST_CASE("cli: measure-check accepts the triangle") {
  auto result = run_cli("measure-check --input " + fixture("triangle.json"));
  CHECK(result.exit_code == 0);
}

TEST_CASE("cli: sample subdivides the triangle") {
  auto result = run_cli("sample --input " + fixture("triangle.json") +
                        " --step 0.25");
  REQUIRE(result.exit_code == 0);
  auto space = hlskit::io::space_from_json(
      hlskit::io::json::parse(result.out));
  CHECK(space.size() == 12);  // 3 nodes + 3 * 3 interior points
}

TEST_CASE("cli: realize emits a valid complex") {
  auto result = run_cli("realize --input " + fixture("triangle.json") +
                        " --resolution 4");
  REQUIRE(result.exit_code == 0);
  auto complex = hlskit::io::complex_from_json(
      hlskit::io::json::parse(result.out));
  CHECK(hlskit::validate_complex(complex).ok());
}

TEST_CASE("cli: validation failure exits with one") {
  auto dir = work_dir();
  auto bad = dir / "bad_space.json";
  std::ofstream(bad) << R"({"points":["a","b","c"],
    "dist":[[0,1,5],[1,0,1],[5,1,0]]})";
  auto result = run_cli("validate --input " + bad.string());
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("triangle") != std::string::npos);
}

TEST_CASE("cli: structural problems exit with two") {
  auto missing = run_cli("hls --input /nonexistent/file.json");
  CHECK(missing.exit_code == 2);

  auto unknown = run_cli("frobnicate --input x");
  CHECK(unknown.exit_code == 2);

  auto dir = work_dir();
  auto negative = dir / "negative.json";
  std::ofstream(negative) << R"({"points":["a","b"],"dist":[[0,-1],[-1,0]]})";
  auto structural = run_cli("validate --input " + negative.string());
  CHECK(structural.exit_code == 2);
}

TEST_CASE("cli: hls dot export renders leaf clusters") {
  auto result = run_cli("hls --input " + fixture("ibundle.json") +
                        " --format dot");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("subgraph cluster_") != std::string::npos);
}

TEST_CASE("cli: glue joins two bundle complexes end to end") {
  auto dir = work_dir();
  auto pairs = dir / "glue_pairs.json";
  std::ofstream(pairs) << R"([["L4_v0","L0_v0"],["L4_v1","L0_v1"]])";
  auto result = run_cli("glue --input " + fixture("ibundle.json") +
                        " --input2 " + fixture("ibundle.json") +
                        " --pairs " + pairs.string() + " --mode tangential");
  REQUIRE(result.exit_code == 0);
  auto j = hlskit::io::json::parse(result.out);
  CHECK(j.at("connected").get<bool>());
  auto glued = hlskit::io::complex_from_json(j);
  CHECK(hlskit::validate_complex(glued).ok());
  CHECK(hlskit::diameter(hlskit::hls(glued).space) == doctest::Approx(2.0));
}

TEST_CASE("cli: collapse merges the requested subset") {
  auto dir = work_dir();
  auto out = dir / "collapsed.json";
  auto result = run_cli("collapse --input " + fixture("space_b.json") +
                        " --subset p1,p2 --output " + out.string());
  REQUIRE(result.exit_code == 0);
  auto j = hlskit::io::load_json_file(out.string());
  CHECK(j.at("space").at("points").size() == 3);
  CHECK(j.at("class_map").at("p1") == j.at("class_map").at("p2"));

  // the emitted quotient is consumable downstream
  auto again = run_cli("gh --input " + out.string() + " --input2 " +
                       out.string());
  REQUIRE(again.exit_code == 0);
  CHECK(again.out.rfind("exact 0", 0) == 0);
}

TEST_CASE("cli: orbit quotient by a full cycle") {
  auto dir = work_dir();
  auto gens = dir / "gens.json";
  std::ofstream(gens) << R"([{"a":"b","b":"c","c":"a"}])";
  auto result = run_cli("orbit --input " + fixture("space_a.json") +
                        " --generators " + gens.string());
  REQUIRE(result.exit_code == 0);
  auto j = hlskit::io::json::parse(result.out);
  CHECK(j.at("space").at("points").size() == 1);
}

TEST_CASE("cli: audit agrees when the index list reaches the grid") {
  auto result = run_cli("audit --input " + fixture("ibundle.json") +
                        " --family const --ns 1,2,4,8 --eps-grid 0.5,0.25 " +
                        "--format json");
  REQUIRE(result.exit_code == 0);
  auto j = hlskit::io::json::parse(result.out);
  CHECK(j.at("agreement") == "agree");
  CHECK(j.at("condition_side").get<bool>());
  CHECK(j.at("convergence").at("verdict") == "converged");
}
