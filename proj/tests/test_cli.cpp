#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "hxd/proof_io.hpp"
#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run hxd_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = hxd::tools::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "hxd_cli_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("check on fixtures") {
  auto r = hxd_run({"check", "fixtures/at_refl.proof"});
  CHECK(r.code == 0);
  CHECK(r.out == "proved, cuts: 0\n");
  r = hxd_run({"check", "fixtures/derived/and_r.proof"});
  CHECK(r.code == 1);
  CHECK(r.out.rfind("well-formed, open leaves:", 0) == 0);
}

TEST_CASE("prove and refute exit codes") {
  CHECK(hxd_run({"prove", "|- <I =c I>"}).code == 0);
  auto r = hxd_run({"prove", "|- @I p"});
  CHECK(r.code == 1);
  CHECK(r.out.find("model of size 1") != std::string::npos);
  CHECK(hxd_run({"prove", "@I <a>p |- @I <a>(p | q)", "--max-depth", "1"}).code == 2);
  CHECK(hxd_run({"refute", "|- @I p", "--bound", "1"}).code == 0);
  CHECK(hxd_run({"refute", "|- @I (p -> p)", "--bound", "2"}).code == 2);
}

TEST_CASE("input errors exit with 3 and a position") {
  auto r = hxd_run({"parse", "@I <a;J: =c b"});
  CHECK(r.code == 3);
  CHECK(r.err == "<inline>:1:14: expected '>', found end of input\n");
  CHECK(hxd_run({"check", "no/such/file.proof"}).code == 3);
  CHECK(hxd_run({"prove"}).code == 3);
  CHECK(hxd_run({"frobnicate"}).code == 3);
}

TEST_CASE("structured output") {
  auto r = hxd_run({"--format", "structured", "parse", "p & q"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["kind"] == "node");
  CHECK(j["core"] == "(p -> q -> false) -> false");
}

TEST_CASE("prove writes a proof that checks") {
  std::string path = tmp("refl.proof");
  REQUIRE(hxd_run({"prove", "|- @I I", "--emit-proof", path}).code == 0);
  CHECK(hxd_run({"check", path}).code == 0);
}

TEST_CASE("cutfree removes the cuts of the expanded MP") {
  std::string path = tmp("mp_free.proof");
  auto r = hxd_run({"cutfree", "fixtures/mp_expanded.proof", "-o", path, "--trace"});
  CHECK(r.code == 0);
  CHECK(r.out.find("proved, cuts: 0") != std::string::npos);
  auto c = hxd_run({"check", path});
  CHECK(c.out == "proved, cuts: 0\n");
}

TEST_CASE("hilbert commands") {
  std::string hil = tmp("refl.hil"), out = tmp("refl_g.proof");
  std::ofstream(hil) << "1. AXIOM AtRefl [i=J]\n2. NEC 1 <a>\n";
  auto r = hxd_run({"hilbert-check", hil});
  CHECK(r.code == 0);
  CHECK(r.out.find("2. ") != std::string::npos);
  CHECK(hxd_run({"hilbert-translate", hil, "--nominal", "K", "-o", out}).code == 0);
  CHECK(hxd::load_proof_file(out)->conclusion.cons.begin()->i == "K");
  std::ofstream(hil) << "1. MP 1 1\n";
  CHECK(hxd_run({"hilbert-check", hil}).code == 1);
}

TEST_CASE("eval") {
  std::string m = tmp("m.model");
  REQUIRE(hxd_run({"prove", "|- @I p", "--emit-model", m}).code == 1);
  CHECK(hxd_run({"eval", m, "I", "p"}).code == 1);
  CHECK(hxd_run({"eval", m, "0", "~p"}).code == 0);
  CHECK(hxd_run({"eval", m, "7", "p"}).code == 3);
}

TEST_CASE("random is reproducible") {
  auto a = hxd_run({"random", "--seed", "4", "--count", "5"});
  auto b = hxd_run({"random", "--seed", "4", "--count", "5"});
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 5);
}
