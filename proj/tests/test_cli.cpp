#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "opcalc/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "opcalc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = opcalc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "opcalc_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

const std::string kNil = R"({"dim":2,"re":[0,2,0,0],"im":[0,0,0,0]})";
}  // namespace

TEST_CASE("exit codes") {
  const std::string T = write_file("t.json", kNil);
  const std::string a2 = write_file("a2.json", R"({"coeffs":[1,0,-1]})");
  const std::string a1 = write_file("a1.json", R"({"coeffs":[1,-1]})");
  const std::string tau = write_file("tau.json", R"({"coeffs":[1,-1.5,0.5]})");
  const std::string bad = write_file("bad.json", R"({"coeffs":[1,)");

  CHECK(call({"member", "--matrix", T, "--alpha", a2}).code == opcalc::cli::kHolds);
  CHECK(call({"member", "--matrix", T, "--alpha", a1}).code == opcalc::cli::kRefuted);
  const Outcome inc = call({"include", "--alpha", a1, "--tau", tau, "--counterexample"});
  CHECK(inc.code == opcalc::cli::kRefuted);
  const json doc = json::parse(inc.out);
  CHECK(doc["status"] == "refuted");
  CHECK(doc["exit_code"] == 1);

  const Outcome b = call({"member", "--matrix", T, "--alpha", bad});
  CHECK(b.code == opcalc::cli::kInputError);
  CHECK(b.out.empty());
  CHECK_FALSE(b.err.empty());
  CHECK(call({"member", "--matrix", "/nonexistent/x.json", "--alpha", a1}).code == opcalc::cli::kInputError);
  CHECK(call({"frobnicate"}).code == opcalc::cli::kInputError);

  // decompose refuses a non-strongly admissible symbol
  const Outcome d = call({"decompose", "--matrix", T, "--alpha", a2});
  CHECK(d.code == opcalc::cli::kRefuted);
  CHECK(d.out.empty());
}

TEST_CASE("renorm document") {
  const std::string T = write_file("t.json", kNil);
  const std::string a2 = write_file("a2.json", R"({"coeffs":[1,0,-1]})");
  const Outcome r = call({"renorm", "--matrix", T, "--alpha", a2});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["schema_version"] == "1");
  CHECK(doc["command"] == "renorm");
  const auto& G = doc["result"]["G"]["re"];
  CHECK(G[0].get<double>() == doctest::Approx(1.0));
  CHECK(G[3].get<double>() == doctest::Approx(5.0));
  CHECK(doc["result"]["contraction_norm"].get<double>() == doctest::Approx(0.894427191));
}

TEST_CASE("identical runs give identical output") {
  const std::string T = write_file("t.json", kNil);
  const std::string a2 = write_file("a2.json", R"({"coeffs":[1,0,-1]})");
  for (const char* cmd : {"member", "renorm", "model"}) {
    const Outcome x = call({cmd, "--matrix", T, "--alpha", a2, "--grid", "16"});
    const Outcome y = call({cmd, "--matrix", T, "--alpha", a2, "--grid", "16"});
    CHECK(x.code == y.code);
    CHECK(x.out == y.out);
  }
}

TEST_CASE("environment overrides apply only to absent flags") {
  const std::string T = write_file("t.json", kNil);
  const std::string a2 = write_file("a2.json", R"({"coeffs":[1,0,-1]})");
  ::setenv("OPCALC_GRID", "8", 1);
  const json env = json::parse(call({"model", "--matrix", T, "--alpha", a2}).out);
  const json flag = json::parse(call({"model", "--matrix", T, "--alpha", a2, "--grid", "12"}).out);
  ::unsetenv("OPCALC_GRID");
  CHECK(env["config"]["grid"] == 8);
  CHECK(flag["config"]["grid"] == 12);
  ::setenv("OPCALC_TOL", "not-a-number", 1);
  CHECK(call({"member", "--matrix", T, "--alpha", a2}).code == opcalc::cli::kInputError);
  ::unsetenv("OPCALC_TOL");
}

TEST_CASE("schema subcommand") {
  const Outcome s = call({"schema"});
  REQUIRE(s.code == 0);
  const json j = json::parse(s.out);
  CHECK(j.contains("$schema"));
}
