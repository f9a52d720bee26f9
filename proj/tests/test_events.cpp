#include <catch_amalgamated.hpp>

#include <algorithm>

#include "support.hpp"
#include "thimac/events.hpp"

using namespace thimac;

namespace {

const char* kModel =
    "model m\n"
    "machine A\nmachine B\n"
    "stage A.c kind create\nstage A.r kind release\nstage A.t kind transfer\n"
    "stage B.t kind transfer\nstage B.v kind receive\nstage B.p kind process\n"
    "flow A.c -> A.r\nflow A.r -> A.t\nflow A.t -> B.t\nflow B.t -> B.v\nflow B.v -> B.p\n";

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

bool has_issue(const std::vector<Issue>& issues, const std::string& code, const std::string& fragment) {
  return std::ranges::any_of(issues, [&](const Issue& i) {
    return i.code == code && i.message.find(fragment) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("corpus events load") {
  auto lic = support::licensing();
  REQUIRE(lic.dynamic);
  CHECK(lic.dynamic->events.size() == 12);
  CHECK(lic.dynamic->events.front().id == "E1");
  CHECK(lic.dynamic->events.back().id == "E12");
  CHECK(lic.dynamic->find("E6")->region_arcs.size() == 1);
  CHECK(lic.dynamic->find("E6")->region_arcs[0].trigger);

  auto ed = support::ed();
  CHECK(ed.dynamic->events.size() == 20);
  CHECK(ed.dynamic->find("E1")->label == "ambulance arrival");
}

TEST_CASE("event DSL errors") {
  const auto m = parse_model(kModel);
  SECTION("unknown stage") {
    try {
      load_events("event E1 \"x\"\nregion A.c, Z.z\n", m);
      FAIL("expected DslError");
    } catch (const DslError& e) {
      CHECK(e.kind() == ErrorKind::UnknownReference);
      CHECK(e.line() == 2);
      CHECK(e.column() == 13);
    }
  }
  SECTION("empty region") {
    try {
      load_events("event E1 \"x\"\nevent E2 \"y\"\nregion A.c\n", m);
      FAIL("expected DslError");
    } catch (const DslError& e) {
      CHECK(e.kind() == ErrorKind::EmptySet);
    }
  }
  SECTION("duplicate event") {
    try {
      load_events("event E1 \"x\"\nregion A.c\nevent E1 \"y\"\nregion A.r\n", m);
      FAIL("expected DslError");
    } catch (const DslError& e) {
      CHECK(e.kind() == ErrorKind::DuplicateId);
      CHECK(e.line() == 3);
    }
  }
  SECTION("unknown arc") {
    CHECK_THROWS_AS(load_events("event E1 \"x\"\nregion A.c, A.t\narcs A.c->A.t\n", m), DslError);
  }
  SECTION("arcs without region") {
    CHECK_THROWS_AS(load_events("event E1 \"x\"\narcs A.c->A.r\n", m), DslError);
  }
}

TEST_CASE("region validation") {
  const auto m = parse_model(kModel);

  const auto shared = load_events("event E1 \"x\"\nregion A.c, A.r\nevent E2 \"y\"\nregion A.r, A.t\n", m);
  auto report = validate_regions(shared, m);
  CHECK(report.ok());
  CHECK(has_issue(report.warnings, "overlap", "A.r"));
  CHECK(has_issue(validate_regions(shared, m, {true}).violations, "overlap", "A.r"));

  const auto gap = load_events("event E1 \"x\"\nregion A.c, A.t\n", m);
  CHECK(has_issue(validate_regions(gap, m).violations, "disconnected-region", "E1"));

  const auto uncovered = load_events("event E1 \"x\"\nregion A.c, A.r, A.t\n", m);
  auto partial = validate_regions(uncovered, m);
  CHECK(partial.ok());
  CHECK(has_issue(partial.warnings, "uncovered-stage", "B.p"));

  const auto cov = region_coverage(uncovered, m);
  CHECK(cov.covered == std::vector<std::string>{"A.c", "A.r", "A.t"});
  CHECK(cov.uncovered == std::vector<std::string>{"B.p", "B.t", "B.v"});
}

TEST_CASE("trigger arcs connect a region") {
  const auto m = parse_model(
      "model m\nmachine A\nmachine B\nstage A.p kind process\nstage B.c kind create\n"
      "trigger A.p ~> B.c\n");
  const auto d = load_events("event E1 \"x\"\nregion A.p, B.c\narcs A.p~>B.c\n", m);
  CHECK(validate_regions(d, m).ok());

  const auto outside = load_events("event E1 \"x\"\nregion A.p\narcs A.p~>B.c\nevent E2 \"y\"\nregion B.c\n", m);
  CHECK(has_issue(validate_regions(outside, m).violations, "arc-outside-region", "A.p~>B.c"));
}

TEST_CASE("corpus coverage accounting is exact") {
  for (auto ws : {support::licensing(), support::ed()}) {
    const auto report = validate_regions(*ws.dynamic, ws.model);
    CHECK(report.ok());
    const auto cov = region_coverage(*ws.dynamic, ws.model);
    CHECK(cov.covered.size() + cov.uncovered.size() == ws.model.stages.size());
    std::vector<std::string> all;
    for (const auto& s : ws.model.stages) all.push_back(s.id);
    std::ranges::sort(all);
    std::vector<std::string> merged = cov.covered;
    merged.insert(merged.end(), cov.uncovered.begin(), cov.uncovered.end());
    std::ranges::sort(merged);
    CHECK(merged == all);
  }
  const auto ed = support::ed();
  CHECK(region_coverage(*ed.dynamic, ed.model).uncovered.empty());
  CHECK(validate_regions(*ed.dynamic, ed.model, {true}).ok());
}

TEST_CASE("events render round trip") {
  for (auto ws : {support::licensing(), support::ed()}) {
    CHECK(load_events(render_events(*ws.dynamic), ws.model) == *ws.dynamic);
  }
}

TEST_CASE("dynamic DOT export") {
  const auto m = parse_model(kModel);
  const auto none = export_dynamic_dot(DynamicModel{"m", {}}, m);
  const auto plain = export_static_dot(m);
  for (const auto& s : m.stages) {
    CHECK(count(none, "\"" + s.id + "\" [label") == 1);
    CHECK(count(plain, "\"" + s.id + "\" [label") == 1);
  }
  CHECK(count(none, "cluster_event_") == 0);

  const auto lic = support::licensing();
  const auto dot = export_dynamic_dot(*lic.dynamic, lic.model);
  CHECK(count(dot, "cluster_event_") == 12);
  for (const auto& s : lic.model.stages) CHECK(count(dot, "\"" + s.id + "\" [label") == 1);

  const auto silent = load_events("event E1 \"x\" silent\nregion A.c\n", m);
  CHECK_FALSE(silent.events[0].observable);
  CHECK(count(export_dynamic_dot(silent, m), "[silent]") == 1);
}
