#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "atlas/report.hpp"

using namespace atlas;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string pointer_of(const json& j) {
  try {
    parse_problem(j);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Input);
    std::string m = e.what();
    return m.substr(0, m.find(':'));
  }
  return "";
}

json base() {
  return json::parse(R"({"system": {"type": "normalized", "exponents": [1], "blocks": [[1], [-1]]}})");
}

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  fs::path tmp = fs::temp_directory_path() / "atlas_cli_out.txt";
  std::string cmd = env + " " + std::string(ATLAS_BIN) + " " + args + " > " + tmp.string() + " 2>/dev/null";
  int st = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string spec(const std::string& name) { return std::string(SPEC_DIR) + "/" + name; }

}  // namespace

TEST_CASE("parse errors carry the JSON pointer") {
  json j = base();
  j["system"]["exponents"] = "x";
  CHECK(pointer_of(j) == "/system/exponents");
  j = json::parse(R"({"system": {"type": "normalized", "exponents": [1, 3], "blocks": [[1, 0], [-1, 0]]}})");
  CHECK(pointer_of(j) == "/system/exponents/1");
  j["system"]["exponents"] = {1};
  CHECK(pointer_of(j) == "/system/blocks/0/lambda");
  j = base();
  j["system"]["type"] = "banana";
  CHECK(pointer_of(j) == "/system/type");
  j = base();
  j["domain"]["a"] = -1;
  CHECK(pointer_of(j) == "/domain/a");
  j = base();
  j["system"]["perturbation"] = {{"type", "expr"}, {"terms", {{{"row", 0}, {"col", 1}, {"coeff", 1}, {"exponent", -1}}}}};
  CHECK(pointer_of(j).rfind("/system/perturbation/terms/0", 0) == 0);
  CHECK(pointer_of(json::array()) == "");
}

TEST_CASE("valid spec parses") {
  auto ps = parse_problem(base());
  CHECK(ps.dim() == 2);
  CHECK(ps.system.kind == SystemKind::Normalized);
  CHECK(ps.system.R.is_zero());
}

TEST_CASE("complex and matrix parsing") {
  CHECK(parse_complex(json(2.5), "/x") == Complex(2.5));
  CHECK(parse_complex(json::array({1, -2}), "/x") == Complex(1, -2));
  CHECK_THROWS_AS(parse_complex(json("i"), "/x"), Error);
  auto m = parse_matrix(json::parse("[[1, [0, 1]], [0, 2]]"), "/m");
  CHECK(m(0, 1) == Complex(0, 1));
  CHECK_THROWS_AS(parse_matrix(json::parse("[[1, 2], [3]]"), "/m"), Error);
}

TEST_CASE("JSON output keeps 17 significant digits") {
  ordered_json j = {{"schema", report_schema}, {"x", 0.1}, {"y", 1.0 / 3.0}, {"inf", INFINITY}};
  std::string s = dump_json(j);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("0.33333333333333331") != std::string::npos);
  CHECK(s.find("\"atlas-report/1\"") != std::string::npos);
  json back = json::parse(s);
  CHECK(back["y"].get<double>() == 1.0 / 3.0);
  CHECK(back["inf"].is_string());
}

TEST_CASE("sectors command") {
  auto r = run("sectors " + spec("quartic_z.json"));
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["schema"] == report_schema);
  CHECK(j["command"] == "sectors");
}

TEST_CASE("empty adequate set is not an error") {
  auto r = run("sectors " + spec("no_adequate.json"));
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["sectors"].empty());
  CHECK(j.contains("diagnostic"));
}

TEST_CASE("rays command writes files with --out") {
  fs::path dir = fs::temp_directory_path() / "atlas_cli_rays";
  fs::remove_all(dir);
  auto r = run("rays " + spec("quartic_z.json") + " --svg --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "rays.svg"));
}

TEST_CASE("points are serialized as modulus and argument") {
  auto r = run("solve " + spec("rank1.json"));
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(r.out.find("\"modulus\"") != std::string::npos);
  CHECK(r.out.find("\"argument\"") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("sectors /nonexistent/spec.json").code == 2);
  CHECK(run("sectors " + spec("quartic_z.json") + " --jobs 0").code == 2);
  CHECK(run("frobnicate x").code == 2);
  fs::path bad = fs::temp_directory_path() / "atlas_bad.json";
  std::ofstream(bad) << R"({"system": {"type": "normalized", "exponents": [2, 1], "blocks": [[1, 0], [-1, 0]]},
    "domain": {"a": 1}, "solver": {"max_a_doublings": 0},
    "system_note": 0})";
  CHECK(run("solve " + bad.string()).code == 2);
  fs::path hard = fs::temp_directory_path() / "atlas_hard.json";
  std::ofstream(hard) << R"({"system": {"type": "normalized", "exponents": [1], "blocks": [[1], [-1]],
    "perturbation": {"type": "expr", "terms": [{"row": 0, "col": 1, "coeff": 500, "exponent": -2}]}},
    "domain": {"a": 1, "sector": [-1.5707963267948966, 4.71238898038469]}, "solver": {"max_a_doublings": 0}})";
  CHECK(run("solve " + hard.string()).code == 3);
}

TEST_CASE("ATLAS_JOBS overrides --jobs") {
  auto r = run("sectors " + spec("quartic_z.json") + " --jobs 1", "ATLAS_JOBS=3");
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["jobs"] == 3);
}
