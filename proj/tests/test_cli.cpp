#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gsp/cli.hpp"
#include "gsp/edge_io.hpp"

namespace gsp {
namespace {

namespace fs = std::filesystem;

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("gsp_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ofstream(dir / "p3.edges") << "0 1\n1 2\n";
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_CASE("real formatting") {
  CHECK(format_real(2.0) == "2.0");
  CHECK(format_real(1.9999999999999996) == "2.0");
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(1e-20) == "1e-20");
}

TEST_CASE("version") {
  const Result r = call({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out == std::string(kReportFormat) + " " + kPrngId + "\n");
}

TEST_CASE("gen writes a path") {
  Sandbox box;
  const Result r = call({"gen", "path", "--n", "10", "--out", box / "plant.edges"});
  CHECK(r.code == 0);
  std::ifstream in(box / "plant.edges");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 9);
  CHECK(read_edge_list_file(box / "plant.edges") == generate(GraphKind::Path, 10, 0.0, 0));
}

TEST_CASE("gen is seeded") {
  const Result a = call({"gen", "er", "--n", "30", "--seed", "5"});
  const Result b = call({"gen", "er", "--n", "30", "--seed", "5"});
  const Result c = call({"gen", "er", "--n", "30", "--seed", "6"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
}

TEST_CASE("gammamax prints the analytic value") {
  Sandbox box;
  const Result r = call({"gammamax", "--plant", box / "p3.edges", "--resistive"});
  CHECK(r.code == 0);
  CHECK(r.out == "2.0\n");
}

TEST_CASE("solve writes a report that replays") {
  Sandbox box;
  const Result r = call({"solve", "--plant", box / "p3.edges", "--resistive", "--method",
                         "proxn", "--gamma", "1.0", "--out", box / "r.json"});
  REQUIRE(r.code == 0);
  const RunReport rep = read_report_file(box / "r.json");
  REQUIRE(rep.solution.size() == 1);
  CHECK(rep.solution[0].i == 0);
  CHECK(rep.solution[0].j == 2);
  CHECK(std::abs(rep.solution[0].w - 0.0773502691896) < 1e-5);
  CHECK(rep.certificate_available);
  CHECK(rep.gap <= 1e-4);
  CHECK(rep.config.command == "solve");

  const Result again = call({"replay", box / "r.json", "--out", box / "r2.json"});
  REQUIRE(again.code == 0);
  RunReport rep2 = read_report_file(box / "r2.json");
  CHECK(rep2.solution == rep.solution);
  CHECK(rep2.J == rep.J);
  CHECK(rep2.solve.objective_trace == rep.solve.objective_trace);
}

TEST_CASE("sweep csv is deterministic") {
  Sandbox box;
  const std::vector<std::string> args = {"sweep", "--plant", box / "p3.edges", "--resistive",
                                         "--gamma", "0,0.5,1,3", "--csv", box / "a.csv",
                                         "--out", box / "s.json"};
  REQUIRE(call(args).code == 0);
  const std::string first = slurp(box / "a.csv");
  REQUIRE(call(args).code == 0);
  CHECK(slurp(box / "a.csv") == first);
  int lines = 0;
  for (char ch : first) lines += ch == '\n';
  CHECK(lines == 5);
  CHECK(read_report_file(box / "s.json").tradeoff.size() == 4);
}

TEST_CASE("polish command") {
  Sandbox box;
  std::ofstream(box / "support.edges") << "0 2\n";
  const Result r = call({"polish", "--plant", box / "p3.edges", "--resistive", "--support",
                         box / "support.edges"});
  REQUIRE(r.code == 0);
  const RunReport rep = report_from_json_string(r.out);
  REQUIRE(rep.polished.size() == 1);
  CHECK(std::abs(rep.polished[0].w - (2.0 / std::sqrt(2.0) - 1.0) / 2.0) < 1e-5);
  std::ofstream(box / "bad.edges") << "0 1\n";
  CHECK(call({"polish", "--plant", box / "p3.edges", "--support", box / "bad.edges"}).code == 2);
}

TEST_CASE("exit codes") {
  Sandbox box;
  std::ofstream(box / "two.edges") << "n 2\n";
  std::ofstream(box / "cand.edges") << "n 4\n0 1\n";
  std::ofstream(box / "four.edges") << "n 4\n";
  std::ofstream(box / "garbage.edges") << "0 zz\n";
  // Unknown flag, bad method, projgrad without --resistive.
  CHECK(call({"solve", "--bogus"}).code == 2);
  CHECK(call({"solve", "--plant", box / "p3.edges", "--method", "admm"}).code == 2);
  CHECK(call({"solve", "--plant", box / "p3.edges", "--method", "projgrad"}).code == 2);
  CHECK(call({"solve", "--plant", box / "garbage.edges"}).code == 2);
  CHECK(call({"gammamax", "--plant", box / "two.edges"}).code == 2);
  CHECK(call({"solve", "--plant", box / "two.edges", "--gamma", "0.5gmax"}).code == 2);
  CHECK(call({}).code == 2);
  // All-ones start leaves nodes 2 and 3 isolated.
  const Result inf =
      call({"solve", "--plant", box / "four.edges", "--candidates", box / "cand.edges"});
  CHECK(inf.code == 1);
  CHECK_FALSE(inf.err.empty());
  // Missing input file and unwritable output.
  CHECK(call({"solve", "--plant", box / "missing.edges"}).code == 3);
  CHECK(call({"solve", "--plant", box / "p3.edges", "--resistive", "--out",
              "/nonexistent/dir/r.json"})
            .code == 3);
  CHECK(call({"gen", "path", "--n", "4", "--out", "/nonexistent/dir/p.edges"}).code == 3);
}

}  // namespace
}  // namespace gsp
