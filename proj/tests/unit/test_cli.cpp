#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "probcert/cli/cli.hpp"
#include "support.hpp"

using namespace probcert;
using namespace probcert::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string expected_verdict(const std::string& path) {
  Sections s = parse_sections(test::slurp(path), path);
  return s.at("expect").at("verdict");
}

const std::map<std::string, int> kCodes = {
    {"ACCEPTED", 0}, {"REJECTED", 1}, {"INCONCLUSIVE", 2}, {"ERROR", 3}};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("section parser") {
    Sections s = parse_sections(
        "# c\n[check]\npost = 1\ninvariant = \"two # not a comment\"\n[program]\nsource = \"\"\"\nmulti\nline\"\"\"\n", "t");
    CHECK(s.at("check").at("post") == "1");
    CHECK(s.at("check").at("invariant") == "two # not a comment");
    CHECK(s.at("program").at("source") == "multi\nline");
    CHECK_THROWS_AS(parse_sections("[check]\npost = 1\npost = 2\n", "t"), AnnotationFileError);
    CHECK_THROWS_AS(parse_sections("post = 1\n", "t"), AnnotationFileError);
    CHECK_THROWS_AS(parse_sections("[check]\npost =\n", "t"), AnnotationFileError);
    CHECK_THROWS_AS(parse_sections("[check]\npost = \"open\n", "t"), AnnotationFileError);
    CHECK_THROWS_AS(parse_sections("[check]\ncolour = 1\n", "t"), AnnotationFileError);
    CHECK_THROWS_AS(parse_sections("[colour]\npost = 1\n", "t"), AnnotationFileError);
  }

  TEST_CASE("annotation validation happens before computation") {
    const std::string base = "[program]\nsource = \"while (a != 0) { { a := 0 } [1/2] { b := b + 1 } }\"\n";
    auto load = [&](const std::string& check) {
      return parse_annotation_file(base + "[check]\n" + check, "inline.ann");
    };
    AnnotationFile ok = load("rule = \"park-upper\"\npost = \"b\"\ninvariant = \"b + [a != 0]\"\ndomain = \"a in 0..1; b in 0..2\"\n");
    CHECK(ok.rule == certificates::Rule::ParkUpper);
    CHECK(ok.kind == transformers::TransformerKind::WP);
    CHECK_THROWS_AS(load("rule = \"ost-b\"\npost = \"b\"\ninvariant = \"b\"\ndomain = \"a in 0..1; b in 0..2\"\nast = \"loop-past\"\n"),
                    Error);
    CHECK_THROWS_AS(load("rule = \"park-upper\"\npost = \"b\"\ninvariant = \"b\"\n"), Error);
    CHECK_THROWS_AS(load("rule = \"nope\"\npost = \"b\"\ninvariant = \"b\"\ndomain = \"a in 0..1; b in 0..2\"\n"), Error);
    CHECK_THROWS_AS(load("rule = \"park-upper\"\npost = \"b\"\ninvariant = \"b\"\ndomain = \"a in 0..1\"\n"), Error);
    CHECK_THROWS_AS(load("rule = \"park-upper\"\npost = \"b\"\ninvariant = \"b\"\ndomain = \"a in 0..1; b in 0..2\"\ncolour = \"red\"\n"),
                    Error);
    CHECK_THROWS_AS(load("rule = \"ost-b\"\npost = \"b\"\ninvariant = \"b\"\ndomain = \"a in 0..1; b in 0..2\"\ncdb_bound = 1\nast = \"loop-ast\"\n"),
                    Error);
    AnnotationFile ert = load("rule = \"ert-lower\"\npost = \"0\"\ninvariant = \"0\"\ndomain = \"a in 0..1; b in 0..2\"\ncdb_bound = \"1/2 + 3\"\n");
    CHECK(ert.kind == transformers::TransformerKind::ERT);
    CHECK(ert.annotations.cdb_bound == mpq_class(7, 2));
  }

  TEST_CASE("config section and flag precedence") {
    AnnotationFile f = load_annotation_file(test::fixture("annotations/diverge_ostc.ann"));
    CHECK(f.config.simulation.step_cap == 1000);
    CHECK(f.expected_verdict == "REJECTED");
  }

  TEST_CASE("every fixture annotation yields its expected exit code") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(test::fixture("annotations"))) {
      if (entry.path().extension() != ".ann") continue;
      const std::string path = entry.path().string();
      CAPTURE(path);
      Run r = invoke({"check", path, "--quiet"});
      CHECK(r.code == kCodes.at(expected_verdict(path)));
      ++count;
    }
    CHECK(count >= 10);
  }

  TEST_CASE("check reports") {
    Run ok = invoke({"check", test::fixture("annotations/cex_ostb.ann")});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("ACCEPTED") != std::string::npos);
    CHECK(ok.out.find("seed") != std::string::npos);

    Run bad = invoke({"check", test::fixture("annotations/cex_prime_ostb.ann"), "--quiet", "--json", "-"});
    CHECK(bad.code == 1);
    nlohmann::json j = nlohmann::json::parse(bad.out);
    CHECK(j["verdict"] == "REJECTED");
    CHECK(j["witness"]["a"] == "1");
    CHECK(j["witness"]["k"] == "10");
    CHECK(j["schema_version"] == kReportSchemaVersion);
    bool cdb_failed = false;
    for (const auto& c : j["conditions"]) {
      if (c["name"] == "cdb") cdb_failed = c["status"] == "FAILED";
      if (c["name"] == "subinvariance") CHECK(c["status"] == "PASSED");
    }
    CHECK(cdb_failed);

    Run seeded = invoke({"check", test::fixture("annotations/cex_ostb.ann"), "--quiet", "--json", "-", "--seed", "42"});
    CHECK(nlohmann::json::parse(seeded.out)["seeds"]["simulation"] == 42);
  }

  TEST_CASE("usage errors") {
    CHECK(invoke({"check", test::fixture("annotations/does_not_exist.ann")}).code == 3);
    CHECK(invoke({"check", test::fixture("annotations/missing_key.ann")}).code == 3);
    CHECK(invoke({"frobnicate"}).code == 3);
    CHECK(invoke({"check", test::fixture("annotations/cex_ostb.ann"), "--tol", "-1"}).code == 3);
    CHECK(invoke({"--help"}).code == 0);
    Run v = invoke({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("probcert") != std::string::npos);
  }

  TEST_CASE("wp command") {
    Run sym = invoke({"wp", test::fixture("programs/ex23.pgcl"), "--post", "b", "--symbolic"});
    CHECK(sym.code == 0);
    CHECK(sym.out == "6 + 4/5*b\n");
    Run ert = invoke({"wp", test::fixture("programs/ex82.pgcl"), "--kind", "ert", "--post", "0", "--symbolic"});
    CHECK(ert.out == "4 + 4/5*[b != 5]\n");
    Run loop = invoke({"wp", test::fixture("programs/geo.pgcl"), "--post", "b", "--state", "a=1,b=0"});
    CHECK(loop.code == 0);
    CHECK(loop.out.find("converged") != std::string::npos);
    CHECK(loop.out.find("0.99999") != std::string::npos);
    Run looped = invoke({"wp", test::fixture("programs/geo.pgcl"), "--post", "b", "--symbolic"});
    CHECK(looped.code == 3);
    Run dom = invoke({"wp", test::fixture("programs/geo.pgcl"), "--post", "b", "--domain", "a in 0..1; b in 0..2"});
    CHECK(dom.code == 0);
    CHECK(std::count(dom.out.begin(), dom.out.end(), '\n') == 6);
  }

  TEST_CASE("simulate command") {
    Run lt = invoke({"simulate", test::fixture("programs/cex.pgcl"), "--what", "looping-time", "--state",
                  "a=1,b=0,k=0", "--samples", "20000"});
    CHECK(lt.code == 0);
    CHECK(lt.out.find("seed           12648430") != std::string::npos);
    CHECK(lt.out.find("max observed") != std::string::npos);
    Run ind = invoke({"simulate", test::fixture("programs/geo.pgcl"), "--what", "induced", "--f", "b", "--I", "0",
                   "--n-index", "0", "--state", "a=0,b=3", "--samples", "100"});
    CHECK(ind.out.find("mean           3\n") != std::string::npos);
    CHECK(ind.out.find("stderr         0\n") != std::string::npos);
    Run cc = invoke({"simulate", test::fixture("programs/coupon3.pgcl"), "--what", "ert", "--state", "x=0",
                  "--samples", "20000", "--at-least", "6.5"});
    CHECK(cc.out.find("check          mean >= 6.5 - 3*stderr: yes") != std::string::npos);
    Run missing = invoke({"simulate", test::fixture("programs/geo.pgcl"), "--what", "post", "--state", "a=1,b=0"});
    CHECK(missing.code == 3);
  }
}
