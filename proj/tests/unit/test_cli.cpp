// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "support/cli.hpp"
#include "support/programs.hpp"

using fav::testsupport::run_cli;
namespace fs = std::filesystem;

namespace {

class Scratch {
 public:
  Scratch() {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("fav-cli-" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  std::string file(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return "\"" + (dir_ / name).string() + "\"";
  }

 private:
  fs::path dir_;
};

std::string fragment() { return "\"" + fav::testsupport::source_path("tests/data/forwarding/fragment.manifest") + "\""; }

}  // namespace

TEST_CASE("check exit codes") {
  Scratch s;
  CHECK(run_cli("check " + s.file("safe.fav", "void main() { int x = 1; }")).exit_code == 0);
  auto v = run_cli("check " + s.file("v.fav", "void main() {\n  int x = nondet(0, 3);\n  if (x == 2) {\n    fail \"two\";\n  }\n}\n"));
  CHECK(v.exit_code == 1);
  CHECK(v.output.find("VIOLATION [two]") != std::string::npos);
  CHECK(v.output.find("1: [-] main 2:3  int x = nondet(0, 3);") != std::string::npos);
  CHECK(run_cli("check " + s.file("f.fav", "int g = 0; void main() { g = 1 / g; }")).exit_code == 2);
  CHECK(run_cli("check " + s.file("b.fav", "void main() { while (true) bound 3 { } }")).exit_code == 3);
}

TEST_CASE("input errors") {
  Scratch s;
  auto bad = run_cli("check " + s.file("bad.fav", "void main() { int x = ; }"));
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("error: ") != std::string::npos);
  CHECK(bad.output.find("bad.fav:1:23: expected expression") != std::string::npos);
  CHECK(run_cli("check /nonexistent/path.fav").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("check x.fav --format yaml").exit_code == 2);
}

TEST_CASE("json check report") {
  Scratch s;
  auto r = run_cli("check --format json " + s.file("v.fav", "void main() { if (nondet(0, 1) == 1) { fail \"one\"; } }"));
  CHECK(r.exit_code == 1);
  auto j = nlohmann::json::parse(r.output);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["verdict"] == "VIOLATION");
  CHECK(j[0]["label"] == "one");
  CHECK(j[0]["path"]["choices"] == nlohmann::json::array({1}));
}

TEST_CASE("simulator program files report the selection") {
  Scratch s;
  auto r = run_cli("check " + s.file("s.fav", "# varenc features: A B\nbool A;\nbool B;\nvoid main() { if (A && !B) { fail \"ab\"; } }\n"));
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("selection: A") != std::string::npos);
}

TEST_CASE("encode prints the golden simulator") {
  auto r = run_cli("encode " + fragment());
  CHECK(r.exit_code == 0);
  std::string golden = fav::testsupport::read_text(fav::testsupport::source_path("tests/data/forwarding/simulator.golden"));
  golden.erase(0, golden.find("# varenc"));
  CHECK(r.output == golden);
}

TEST_CASE("verify and compose on the fragment") {
  auto v = run_cli("verify " + fragment());
  CHECK(v.exit_code == 0);
  CHECK(v.output.find("== brute force: 2 products") != std::string::npos);
  auto j = run_cli("verify --format json --strategy simulator " + fragment());
  CHECK(j.exit_code == 0);
  auto doc = nlohmann::json::parse(j.output);
  CHECK(doc["brute_force"].empty());
  CHECK(doc["simulator"].size() == 1);
  auto c = run_cli("compose " + fragment() + " --product EMailClient,Forward");
  CHECK(c.exit_code == 0);
  CHECK(c.output.find("incoming$EMailClient") != std::string::npos);
  CHECK(run_cli("compose " + fragment() + " --product Forward").exit_code == 2);
}
