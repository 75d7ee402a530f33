#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hypme/cli.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = hypme::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kData = HYPME_DATA_DIR;

}  // namespace

TEST_CASE("report envelope") {
  auto r = run({"graph-analyze", "--gen", "cycle:8"});
  REQUIRE(r.code == 0);
  auto j = r.report();
  CHECK(j["tool"] == "hypme");
  CHECK(j["version"] == hypme::kVersion);
  CHECK(j["command"] == "graph-analyze");
  CHECK(j["config"].contains("seed"));
  CHECK(j["config"].contains("threads"));
  CHECK(j.contains("provenance"));
  CHECK(j["result"]["delta_thin"] == "2/1");
  CHECK(j["result"]["certified_delta"] == "4/1");
}

TEST_CASE("trees are 0-hyperbolic") {
  auto j = run({"graph-analyze", "--gen", "tree:3,4"}).report();
  CHECK(j["result"]["delta_thin"] == "0/1");
  CHECK(j["result"]["delta_four_point"] == "0/1");
}

TEST_CASE("find-cycles on a grid") {
  auto r = run({"find-cycles", "--gen", "grid:4,4", "--min-a", "1/2", "--min-n", "4"});
  REQUIRE(r.code == 0);
  auto j = r.report();
  CHECK(j["result"]["outcome"] == "found");
}

TEST_CASE("threshold on F2") {
  auto j = run({"threshold", "--group", "F2"}).report();
  CHECK(j["result"]["p_threshold"] == "2/1");
  CHECK(j["result"]["exact"] == true);
  auto k = run({"threshold", "--delta", "2", "--entropy", "1"}).report();
  CHECK(k["result"]["p_threshold"] == "218/1");
}

TEST_CASE("coupling commands on shipped specs") {
  auto v = run({"coupling-verify", "--spec", kData + "/couplings/z2_index2.json", "--radius", "2"});
  CHECK(v.code == 0);
  auto b = run({"coupling-build", "--spec", kData + "/couplings/f2_index2.json"});
  REQUIRE(b.code == 0);
  CHECK(b.report()["result"]["index"] == 2);
}

TEST_CASE("conditions") {
  auto j = run({"conditions", "--condition", "7", "--delta", "1", "--schedule", "log:300"}).report();
  CHECK(j["result"]["verdict"] == "holds");
  auto f = run({"conditions", "--condition", "5", "--delta", "1", "--group", "F2", "--phi", "power:2"}).report();
  CHECK(f["result"]["verdict"] == "fails");
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"graph-analyze", "--no-such-flag"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"graph-analyze", "--gen", "tree:3"}).code == 1);
  CHECK(run({"group-ball"}).code == 1);
  CHECK(run({"group-ball", "--group", "C2*C3", "--radius", "3", "--out", "/nonexistent/dir/x.json"}).code == 1);
  auto r = run({"threshold", "--delta", "-1", "--entropy", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("same seed gives identical bytes") {
  std::vector<std::string> args{"graph-analyze", "--gen", "random-tree-chords:700,3,9", "--samples", "5000",
                                "--seed", "17"};
  auto a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.report()["result"]["certified_delta"].is_null());
}
