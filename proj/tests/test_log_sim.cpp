#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "support.hpp"
#include "thimac/conformance.hpp"
#include "thimac/log_sim.hpp"

using namespace thimac;
using support::model;

namespace {

SimConfig config(std::uint64_t seed, std::size_t cases) {
  SimConfig c;
  c.seed = seed;
  c.cases = cases;
  return c;
}

}  // namespace

TEST_CASE("case names") {
  CHECK(case_name(0, 10) == "case-0000");
  CHECK(case_name(42, 1000) == "case-0042");
  CHECK(case_name(12345, 20000) == "case-12345");
  CHECK(case_name(7, 100000) == "case-00007");
}

TEST_CASE("config validation") {
  auto c = config(1, 1);
  c.edge_weights[{"A", "B"}] = 0.0;
  CHECK_THROWS_AS(validate_config(c), ModelError);
  c = config(1, 1);
  c.start_weights["A"] = -1.0;
  CHECK_THROWS_AS(validate_config(c), ModelError);
  c = config(1, 1);
  c.fault = FaultSpec{FaultKind::Drop, 1.5};
  CHECK_THROWS_AS(validate_config(c), ModelError);
  c = config(1, 1);
  c.max_steps = 0;
  CHECK_THROWS_AS(validate_config(c), ModelError);
  CHECK_NOTHROW(validate_config(config(1, 1)));
}

TEST_CASE("fault kinds parse") {
  for (auto k : {FaultKind::Drop, FaultKind::SwapAdjacent, FaultKind::IllegalStart}) {
    CHECK(parse_fault_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_fault_kind("Shuffle"));
}

TEST_CASE("simulated cases are accepted streams") {
  const auto lic = support::licensing();
  const auto sim = simulate_log(*lic.behavior, config(11, 300));
  CHECK(sim.case_errors.empty());
  CHECK(sim.log.case_count() == 300);
  const auto check = check_log(sim.log, *lic.behavior, {});
  CHECK(check.accepted == 300);

  const auto t0 = SimConfig{}.start_time;
  for (const auto& e : sim.log.events) {
    CHECK(e.timestamp == t0 + std::chrono::minutes(e.seq));
    CHECK(e.source == EventSource::Simulated);
  }
}

TEST_CASE("same seed, same log") {
  const auto ed = support::ed();
  const auto a = write_log(simulate_log(*ed.behavior, config(99, 200)).log);
  const auto b = write_log(simulate_log(*ed.behavior, config(99, 200)).log);
  const auto c = write_log(simulate_log(*ed.behavior, config(100, 200)).log);
  CHECK(a == b);
  CHECK(a != c);

  // A case depends only on its own index.
  const auto small = simulate_log(*ed.behavior, config(99, 20)).log;
  const auto large = simulate_log(*ed.behavior, config(99, 200)).log;
  const auto first = traces_of(small);
  const auto more = traces_of(large);
  for (std::size_t i = 0; i < first.size(); ++i) {
    REQUIRE(first[i].steps.size() == more[i].steps.size());
    for (std::size_t j = 0; j < first[i].steps.size(); ++j) {
      CHECK(first[i].steps[j].symbol == more[i].steps[j].symbol);
    }
  }
}

TEST_CASE("stream frequencies follow uniform branching") {
  const auto lic = support::licensing();
  const auto sim = simulate_log(*lic.behavior, config(2024, 10000));
  std::map<std::string, std::size_t> freq;
  for (const auto& t : traces_of(sim.log)) {
    std::string key;
    for (const auto& s : t.steps) key += s.symbol + " ";
    ++freq[key];
  }
  REQUIRE(freq.size() == 4);
  for (const auto& [_, n] : freq) CHECK(std::abs(static_cast<double>(n) / 10000.0 - 0.25) <= 0.05);
}

TEST_CASE("weights bias the walk") {
  const auto lic = support::licensing();
  auto c = config(5, 4000);
  c.edge_weights[{"E2", "E3"}] = 3.0;
  const auto sim = simulate_log(*lic.behavior, c);
  std::size_t bike = 0;
  for (const auto& t : traces_of(sim.log)) bike += t.steps[2].symbol == "E3";
  CHECK(std::abs(static_cast<double>(bike) / 4000.0 - 0.75) <= 0.05);
}

TEST_CASE("ends with successors may stop or continue") {
  const auto b = model({"A", "B"}, {"A>B"}, {"A"}, {"A", "B"});
  const auto sim = simulate_log(b, config(8, 2000));
  std::size_t stopped = 0;
  for (const auto& t : traces_of(sim.log)) stopped += t.steps.size() == 1;
  CHECK(std::abs(static_cast<double>(stopped) / 2000.0 - 0.5) <= 0.05);
}

TEST_CASE("dead ends and runaway walks are reported") {
  const auto dead = model({"A", "B", "C"}, {"A>B", "A>C"}, {"A"}, {"B"});
  const auto sim = simulate_log(dead, config(1, 200));
  CHECK_FALSE(sim.case_errors.empty());
  CHECK(sim.log.case_count() + sim.case_errors.size() == 200);
  CHECK(sim.case_errors.front().find("dead end at C") != std::string::npos);

  const auto loop = model({"A", "B", "C"}, {"A>B", "B>A", "B>C"}, {"A"}, {"C"});
  auto c = config(1, 50);
  c.max_steps = 3;
  const auto capped = simulate_log(loop, c);
  for (const auto& t : traces_of(capped.log)) CHECK(t.steps.size() <= 3);
  CHECK(capped.log.case_count() + capped.case_errors.size() == 50);
}

TEST_CASE("fault injection") {
  const auto lic = support::licensing();
  auto c = config(17, 500);
  const auto clean = simulate_log(*lic.behavior, c).log;

  SECTION("rate zero leaves the log alone") {
    c.fault = FaultSpec{FaultKind::Drop, 0.0};
    CHECK(inject_faults(clean, c) == clean);
  }
  SECTION("illegal start rejects every case") {
    c.fault = FaultSpec{FaultKind::IllegalStart, 1.0};
    const auto faulty = inject_faults(clean, c);
    CHECK(faulty.header.back().find("mutated case-0499 IllegalStart") == 0);
    const auto check = check_log(faulty, *lic.behavior, {});
    CHECK(check.rejected == 500);
    for (const auto& v : check.verdicts) {
      CHECK(std::get<Rejected>(v.verdict) == Rejected{IllegalStart{"E2"}, 0});
    }
  }
  SECTION("drop and swap break every case") {
    for (auto kind : {FaultKind::Drop, FaultKind::SwapAdjacent}) {
      c.fault = FaultSpec{kind, 1.0};
      const auto faulty = inject_faults(clean, c);
      CHECK(read_log(write_log(faulty)).errors.empty());
      const auto check = check_log(faulty, *lic.behavior, {});
      CHECK(check.accepted == 0);
    }
  }
  SECTION("partial rate") {
    c.fault = FaultSpec{FaultKind::Drop, 0.3};
    const auto faulty = inject_faults(clean, c);
    const auto check = check_log(faulty, *lic.behavior, {});
    CHECK(std::abs(static_cast<double>(check.accepted) / 500.0 - 0.7) <= 0.08);
    CHECK(inject_faults(clean, c) == faulty);
  }
}
