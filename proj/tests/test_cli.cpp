#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catbound/cli.hpp"

using namespace catbound;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json strip_timestamp(Json j) {
  if (j.contains("manifest")) j["manifest"].erase("timestamp");
  return j;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("catbound_test_" + name);
}

}  // namespace

TEST_CASE("ket json roundtrip and malformed documents") {
  const OptimalTriple t = construct_optimal(CVector::basis(2, 0), CVector::basis(2, 1));
  const Json j = to_json(t.chi1);
  const BipartiteKet back = ket_from_json(Json::parse(j.dump()));
  CHECK(back.amp() == t.chi1.amp());
  CHECK_THROWS_AS(ket_from_json(Json::parse(R"({"env_dim": 1, "amp": [[[1,0]], [[1,0]]]})")), FormatError);
  CHECK_THROWS_AS(ket_from_json(Json::parse(R"({"env_dim": 2, "amp": [[[1,0]], [[0,0]]]})")), FormatError);
  CHECK_THROWS_AS(ket_from_json(Json::parse(R"({"amp": []})")), FormatError);
  CHECK_THROWS_AS(ket_from_json(Json::parse(R"({"env_dim": 1, "amp": [[[1,"x"]], [[0,0]]]})")), FormatError);
  CHECK_NOTHROW(ket_from_json(Json::parse(R"({"env_dim": 1, "amp": [[[1,0]], [[0,0]]]})")));
}

TEST_CASE("sweep csv layout") {
  const std::string csv = sweep_csv(sweep_a(3));
  CHECK(csv.rfind("a,lambda,lambda_sq,residual_eq7\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("\r") == std::string::npos);
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("verify passes and lists every check") {
  const Run r = run({"verify"});
  CHECK(r.code == kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(j["all_passed"] == true);
  bool has_eq12 = false;
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("residual"));
    CHECK(c.contains("tolerance"));
    if (c["name"] == "eq12_rho_equal") has_eq12 = true;
  }
  CHECK(has_eq12);
  CHECK(run({"verify", "--dim", "7", "--seed", "3"}).code == kExitOk);
}

TEST_CASE("construct bundle round-trips through verify --state-file") {
  const auto path = temp_file("bundle.json");
  REQUIRE(run({"construct", "--dim", "3", "--seed", "5", "--out", path.string()}).code == kExitOk);
  CHECK(run({"verify", "--state-file", path.string()}).code == kExitOk);

  // Tamper with a stored reduced matrix: the comparison check must fail.
  Json doc;
  {
    std::ifstream f(path);
    doc = Json::parse(f);
  }
  doc["reduced"]["rho1"][0][0][0] = 0.5;
  {
    std::ofstream f(path);
    f << doc.dump();
  }
  CHECK(run({"verify", "--state-file", path.string()}).code == kExitCheckFailed);
  std::filesystem::remove(path);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"verify", "--dim", "1"}).code == kExitUsage);
  CHECK(run({"verify", "--dim", "abc"}).code == kExitUsage);
  CHECK(run({"verify", "--state-file", "/nonexistent/state.json"}).code == kExitUsage);
  CHECK(run({"optimize", "--restarts", "0"}).code == kExitUsage);
  CHECK(run({"optimize", "--dim", "1"}).code == kExitUsage);
  CHECK(run({"construct", "--dim", "1"}).code == kExitUsage);
  CHECK(run({"construct", "--basis", "--seed", "1"}).code == kExitUsage);
  CHECK(run({"sweep", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"sweep", "--steps", "1"}).code == kExitUsage);
  CHECK(run({"sweep", "--out", "/nonexistent/dir/out.csv"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);

  const auto bad = temp_file("bad.json");
  {
    std::ofstream f(bad);
    f << "{not json";
  }
  CHECK(run({"verify", "--state-file", bad.string()}).code == kExitUsage);
  std::filesystem::remove(bad);

  // An unattainable tolerance leaves no feasible restart.
  CHECK(run({"optimize", "--restarts", "1", "--tol-constraint", "1e-300"}).code == kExitNotConverged);
}

TEST_CASE("every subcommand is deterministic modulo timestamp") {
  const std::vector<std::vector<std::string>> cases{
      {"verify", "--seed", "4"},
      {"sweep", "--steps", "11"},
      {"sweep", "--steps", "11", "--format", "json"},
      {"construct", "--dim", "4", "--seed", "9"},
      {"construct", "--dim", "3"},
      {"optimize", "--restarts", "2", "--seed", "8"},
  };
  for (const auto& args : cases) {
    CAPTURE(args[0]);
    const Run a = run(args), b = run(args);
    CHECK(a.code == b.code);
    if (args.size() >= 2 && args[0] == "sweep" && args.size() == 3) {
      CHECK(a.out == b.out);
    } else {
      CHECK(strip_timestamp(Json::parse(a.out)) == strip_timestamp(Json::parse(b.out)));
    }
  }
}
