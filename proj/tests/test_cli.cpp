#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "qjet/io.hpp"

using namespace qjet;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli_binary(const std::string& args) {
  std::string cmd = std::string(QJET_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (fgets(buf, sizeof(buf), pipe)) r.output += buf;
  int status = pclose(pipe);
  r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(QJET_FIXTURE_DIR) + "/" + name;
}

json load(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  return json::parse(in);
}

}  // namespace

TEST_CASE("canonical serialization is idempotent on every fixture") {
  for (const char* name :
       {"sl2.json", "abelian2.json", "heisenberg_law.json", "z2_nerve.json", "young22.json",
        "young111.json", "young_closed.json", "gerbe_b.json", "crossed_center.json",
        "area_cocycle.json"}) {
    CAPTURE(name);
    json doc = load(fixture(name));
    std::string once = io::serialize_document(io::parse_document(doc)).dump(2);
    std::string twice = io::serialize_document(io::parse_document(json::parse(once))).dump(2);
    CHECK(once == twice);
  }
}

TEST_CASE("schema errors carry field diagnostics") {
  CHECK_THROWS_WITH_AS(io::parse_document(json{{"kind", "nonsense"}}),
                       doctest::Contains("unknown kind"), std::invalid_argument);
  json missing = {{"kind", "lie_algebra"}};
  CHECK_THROWS_WITH_AS(io::parse_document(missing), doctest::Contains("basis"),
                       std::invalid_argument);
  json bad_bracket = load(fixture("sl2.json"));
  bad_bracket["brackets"][0]["left"] = "zz";
  CHECK_THROWS_AS(io::parse_document(bad_bracket), std::invalid_argument);
}

TEST_CASE("cli check: verdicts and exit codes") {
  SUBCASE("sl2 passes") {
    RunResult r = run_cli_binary("check --input " + fixture("sl2.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("jacobi: ok") != std::string::npos);
  }
  SUBCASE("mutated sl2 fails with a witness triple") {
    RunResult r = run_cli_binary("check --input " + fixture("sl2_broken.json"));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("jacobi: FAIL") != std::string::npos);
    CHECK(r.output.find("triple") != std::string::npos);
  }
  SUBCASE("empty abelian algebra is ok") {
    RunResult r = run_cli_binary("check --input " + fixture("abelian2.json"));
    CHECK(r.exit_code == 0);
  }
  SUBCASE("non-associative group law is a failing verdict") {
    RunResult r = run_cli_binary("check --input " + fixture("broken_law.json"));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("group_law: FAIL") != std::string::npos);
  }
  SUBCASE("missing file is a usage error") {
    RunResult r = run_cli_binary("check --input /nonexistent.json");
    CHECK(r.exit_code == 2);
  }
  SUBCASE("structured format embeds the schema version") {
    RunResult r = run_cli_binary("check --input " + fixture("sl2.json") + " --format structured");
    CHECK(r.exit_code == 0);
    json parsed = json::parse(r.output);
    CHECK(parsed.at("schema_version") == 1);
    CHECK(parsed.at("ok") == true);
  }
}

TEST_CASE("cli build") {
  SUBCASE("weil on the abelian algebra: d xi = t") {
    RunResult r = run_cli_binary("build --input " + fixture("abelian2.json") +
                                 " --construction weil --format structured");
    CHECK(r.exit_code == 0);
    json parsed = json::parse(r.output);
    CHECK(parsed.at("objects").at("differential").at("xi_a1") == "t_a1");
    CHECK(parsed.at("objects").at("differential").at("t_a1") == "0");
  }
  SUBCASE("nerve one-jet of the Heisenberg law matches CE") {
    RunResult r = run_cli_binary("build --input " + fixture("heisenberg_law.json") +
                                 " --construction nerve_one_jet --format structured");
    CHECK(r.exit_code == 0);
    json parsed = json::parse(r.output);
    CHECK(parsed.at("objects").at("differential").at("e3") == "-e1*e2");
    bool found = false;
    for (const auto& v : parsed.at("verdicts"))
      if (v.at("name") == "matches_chevalley_eilenberg") found = v.at("ok") == true;
    CHECK(found);
  }
  SUBCASE("gerbe two-form with closedness verdict") {
    RunResult r = run_cli_binary("build --input " + fixture("gerbe_b.json") +
                                 " --construction gerbe_two_form --format structured");
    CHECK(r.exit_code == 0);
    json parsed = json::parse(r.output);
    CHECK(parsed.at("objects").at("omega") == "d1_x1*d1_x2");
  }
  SUBCASE("inapplicable pairing is a usage error") {
    RunResult r = run_cli_binary("build --input " + fixture("sl2.json") +
                                 " --construction nerve_one_jet");
    CHECK(r.exit_code == 2);
  }
  SUBCASE("unknown construction is a usage error") {
    RunResult r =
        run_cli_binary("build --input " + fixture("sl2.json") + " --construction banana");
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("cli enumerate") {
  SUBCASE("nerve Z/2 with a 2-point set") {
    RunResult r = run_cli_binary("enumerate --input " + fixture("z2_nerve.json") +
                                 " --params 2 --format structured");
    CHECK(r.exit_code == 0);
    json parsed = json::parse(r.output);
    CHECK(parsed.at("objects").at("morphism_count") == 2);
  }
  SUBCASE("nerve Z/3 with a 3-point set") {
    RunResult r = run_cli_binary("enumerate --input " + fixture("z3_nerve.json") +
                                 " --params 3 --format structured");
    CHECK(r.exit_code == 0);
    json parsed = json::parse(r.output);
    CHECK(parsed.at("objects").at("morphism_count") == 9);
  }
  SUBCASE("singleton set threads through the vertices") {
    RunResult r = run_cli_binary("enumerate --input " + fixture("z3_nerve.json") +
                                 " --params 1 --format structured");
    CHECK(r.exit_code == 0);
    json parsed = json::parse(r.output);
    CHECK(parsed.at("objects").at("morphism_count") == 1);
  }
}

TEST_CASE("cli schur") {
  SUBCASE("series of [2,2]") {
    RunResult r = run_cli_binary("schur --input " + fixture("young22.json") +
                                 " --construction series --format structured");
    CHECK(r.exit_code == 0);
    json parsed = json::parse(r.output);
    json expected = json::array({json::array({2, 2}), json::array({3, 1})});
    CHECK(parsed.at("objects").at("series") == expected);
  }
  SUBCASE("odd dimension of [1,1,1] on two letters") {
    RunResult r = run_cli_binary("schur --input " + fixture("young111.json") +
                                 " --construction dim --format structured");
    CHECK(r.exit_code == 0);
    json parsed = json::parse(r.output);
    CHECK(parsed.at("objects").at("dimension") == 4);
  }
  SUBCASE("closed forms on the odd line") {
    RunResult r = run_cli_binary("schur --input " + fixture("young_closed.json") +
                                 " --construction closed --format structured");
    CHECK(r.exit_code == 0);
    json parsed = json::parse(r.output);
    CHECK(parsed.at("objects").at("dimension") == 1);
  }
  SUBCASE("omega2 identity with an explicit degree") {
    RunResult r = run_cli_binary("schur --construction omega2 --degree 2 --format structured");
    CHECK(r.exit_code == 0);
  }
  SUBCASE("series rejects non-2-column input") {
    RunResult r = run_cli_binary("schur --input " + fixture("young111.json") +
                                 " --construction series");
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("reports are deterministic across runs") {
  std::string args = "build --input " + fixture("heisenberg_law.json") +
                     " --construction nerve_one_jet --format structured";
  RunResult a = run_cli_binary(args);
  RunResult b = run_cli_binary(args);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.output == b.output);
}
