#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = thimac::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string lic() { return support::corpus("licensing").string(); }
std::string ed() { return support::corpus("ed").string(); }

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "thimac_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::size_t lines(const std::string& text) { return std::ranges::count(text, '\n'); }

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"-w", lic(), "simulate", "--cases", "3"}).code == 2);
  CHECK(run({"-w", lic(), "check", "--log", "/no/such/file.csv"}).code == 2);
  CHECK(run({"-w", "/no/such/dir", "validate"}).code == 2);
  CHECK(run({"-w", lic(), "export-dot", "--level", "fancy"}).code == 2);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("enumerate") != std::string::npos);
}

TEST_CASE("validate") {
  const auto ok = run({"-w", ed(), "validate"});
  CHECK(ok.code == 0);
  CHECK(ok.out == "0 violation(s), 0 warning(s)\n");

  const auto warn = run({"-w", lic(), "validate"});
  CHECK(warn.code == 0);
  CHECK(warn.out.find("uncovered-stage") != std::string::npos);

  const auto broken = scratch("broken.tm");
  write(broken, "model m\nmachine A\nstage A.c kind create\nstage A.v kind receive\nflow A.c -> A.v\n");
  const auto bad = run({"--model", broken.string(), "validate"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("illegal adjacency create->receive") != std::string::npos);

  const auto syntax = scratch("syntax.tm");
  write(syntax, "model m\nmachine A\nstage A.c kind nope\n");
  const auto err = run({"--model", syntax.string(), "validate"});
  CHECK(err.code == 1);
  CHECK(err.err.find("line 3, column 16") != std::string::npos);
  CHECK(err.err.find("syntax.tm") != std::string::npos);
}

TEST_CASE("enumerate") {
  const auto r = run({"-w", lic(), "enumerate"});
  CHECK(r.code == 0);
  CHECK(lines(r.out) == 4);
  CHECK(r.out.find("E1 E2 E3 E5 E10 E7 E8 E11\n") != std::string::npos);
  CHECK(r.err == "4 stream type(s)\n");
  CHECK(lines(run({"-w", ed(), "enumerate"}).out) == 26);
  CHECK(lines(run({"-w", ed(), "enumerate", "--max-len", "8"}).out) == 2);
}

TEST_CASE("check and discover") {
  const auto log = support::corpus("licensing/license_log.csv").string();
  const auto map = support::corpus("licensing/mapping.map").string();
  const auto r = run({"-w", lic(), "check", "--log", log, "--map", map});
  CHECK(r.code == 0);
  CHECK(r.err.find("6 accepted, 0 rejected") != std::string::npos);
  CHECK(lines(r.out) == 7);

  const auto unmapped = run({"-w", lic(), "check", "--log", log});
  CHECK(unmapped.code == 0);
  CHECK(unmapped.err.find("0 accepted, 6 rejected") != std::string::npos);

  const auto skip = support::corpus("licensing/skip_classes.csv").string();
  const auto d = run({"-w", lic(), "discover", "--log", skip, "--min-support", "1"});
  CHECK(d.code == 0);
  CHECK(d.out == "kind,from,to,support\nAddEdge,E2,E5,3\n");
  CHECK(d.err.find("IllegalTransition(E2,E5) support 3") != std::string::npos);

  const auto review = run({"-w", lic(), "discover", "--log", log});
  CHECK(review.out == "kind,from,to,support\n");
  CHECK(review.err.find("mapping review: UnknownActivity(X)") != std::string::npos);
}

TEST_CASE("malformed log rows are reported") {
  const auto path = scratch("rows.csv");
  write(path, "case_id,event_id,seq,timestamp,source\n"
              "a,E1,0,2021-01-01T00:00:00Z,Simulated\n"
              "a,E2,1,oops,Simulated\n"
              "b,E1,0,2021-01-01T00:00:00Z,Simulated\n");
  const auto r = run({"-w", lic(), "check", "--log", path.string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("rows.csv:3: invalid timestamp") != std::string::npos);
  CHECK(r.err.find("0 accepted, 0 rejected, 2 incomplete") != std::string::npos);
}

TEST_CASE("discover then enhance") {
  const auto skip = support::corpus("licensing/skip_classes.csv").string();
  const auto proposals = scratch("proposals.csv");
  const auto enhanced = scratch("enhanced.bh");
  REQUIRE(run({"-w", lic(), "discover", "--log", skip, "--out", proposals.string()}).code == 0);
  const auto e = run({"-w", lic(), "enhance", "--proposals", proposals.string(), "--out",
                      enhanced.string(), "--log", skip});
  CHECK(e.code == 0);
  CHECK(e.err.find("streams 4 -> 6") != std::string::npos);
  CHECK(e.err.find("re-check: 3 accepted, 0 rejected") != std::string::npos);

  const auto recheck = run({"-w", lic(), "--behavior", enhanced.string(), "check", "--log", skip});
  CHECK(recheck.err.find("3 accepted") != std::string::npos);
  CHECK(lines(run({"-w", lic(), "--behavior", enhanced.string(), "enumerate"}).out) == 6);

  const auto junk = scratch("junk.csv");
  write(junk, "kind,from,to,support\nAddEdge,E2,E99,1\n");
  CHECK(run({"-w", lic(), "enhance", "--proposals", junk.string(), "--out", enhanced.string()}).code == 1);
}

TEST_CASE("simulate then check") {
  const auto out = scratch("sim.csv");
  const auto a = run({"-w", lic(), "simulate", "--seed", "42", "--cases", "100", "--out", out.string()});
  CHECK(a.code == 0);
  const auto b = run({"-w", lic(), "simulate", "--seed", "42", "--cases", "100"});
  CHECK(b.out == thimac::read_text_file(out));
  CHECK(run({"-w", lic(), "check", "--log", out.string()}).err.find("100 accepted") != std::string::npos);

  const auto f = run({"-w", lic(), "simulate", "--seed", "42", "--cases", "100", "--fault",
                      "IllegalStart", "--rate", "1"});
  write(out, f.out);
  const auto c = run({"-w", lic(), "check", "--log", out.string()});
  CHECK(c.err.find("0 accepted, 100 rejected") != std::string::npos);
  CHECK(run({"-w", lic(), "simulate", "--seed", "1", "--cases", "1", "--rate", "0.5"}).code == 2);
}

TEST_CASE("diff and export") {
  const auto variant = support::corpus("ed/variant.bh").string();
  const auto d = run({"-w", ed(), "diff", "--other", variant, "--csv"});
  CHECK(d.code == 0);
  CHECK(d.out == "kind,side,element\nedge,b,E3->E7\nstart,a,E1\n");

  const auto dot = run({"-w", ed(), "export-dot", "--level", "behavior", "--overlay", variant});
  CHECK(dot.code == 0);
  CHECK(dot.out.find("\"E3\" -> \"E7\" [color=red, penwidth=2]") != std::string::npos);

  for (const auto* level : {"static", "dynamic", "behavior"}) {
    const auto r = run({"-w", lic(), "export-dot", "--level", level});
    CHECK(r.code == 0);
    CHECK(r.out.find("digraph") == 0);
  }
}
