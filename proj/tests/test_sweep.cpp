#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ariswpc/sweep.hpp"

namespace sw = ariswpc::sweep;
namespace ap = ariswpc::params;

namespace {

template <typename Fn>
bool throws_mentioning(Fn&& fn, const std::string& needle) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

sw::SweepSpec analytic_sweep(std::string axis, std::vector<double> values) {
  sw::SweepSpec spec;
  spec.axis = std::move(axis);
  spec.values = std::move(values);
  return spec;
}

bool same_record(const sw::SweepRecord& a, const sw::SweepRecord& b) {
  return a.point.m == b.point.m && a.point.rho_db == b.point.rho_db &&
         a.point.alpha == b.point.alpha && a.point.k_nodes == b.point.k_nodes &&
         a.p_out_analytic == b.p_out_analytic && a.p_raw == b.p_raw &&
         a.p_out_mc == b.p_out_mc && a.mc_stderr == b.mc_stderr && a.trials == b.trials &&
         a.seed == b.seed && a.error == b.error;
}

}  // namespace

TEST_CASE("config parsing fills defaults and named fields") {
  SUBCASE("empty object keeps every default") {
    const auto parsed = sw::parse_config("{}");
    const ap::SystemParams def;
    CHECK(parsed.base.alpha == def.alpha);
    CHECK(parsed.base.m == def.m);
    CHECK(parsed.base.k_nodes == def.k_nodes);
    CHECK(parsed.base.sigma_r_dbm == def.sigma_r_dbm);
    CHECK_FALSE(parsed.sweep.has_value());
    CHECK_FALSE(parsed.mc.has_value());
  }
  SUBCASE("explicit fields land where they belong") {
    const auto parsed = sw::parse_config(R"({
      "alpha": 0.4, "eta": 0.8, "p_ps_dbm": 12.5, "m": 64,
      "rho_db": 0, "r_rate": 2.0, "k_nodes": 500, "sigma_r_dbm": -90
    })");
    CHECK(parsed.base.alpha == 0.4);
    CHECK(parsed.base.eta == 0.8);
    CHECK(parsed.base.p_ps_dbm == 12.5);
    CHECK(parsed.base.m == 64);
    CHECK(parsed.base.rho_db == 0.0);
    CHECK(parsed.base.r_rate == 2.0);
    CHECK(parsed.base.k_nodes == 500);
    CHECK(parsed.base.sigma_r_dbm == -90.0);
  }
  SUBCASE("integral floats are accepted for integer fields") {
    CHECK(sw::parse_config(R"({"m": 8.0})").base.m == 8);
  }
}

TEST_CASE("config parsing rejects bad input with a pointed message") {
  CHECK(throws_mentioning([] { (void)sw::parse_config("{nope"); }, "malformed"));
  CHECK(throws_mentioning([] { (void)sw::parse_config("[1,2]"); }, "object"));
  CHECK(throws_mentioning([] { (void)sw::parse_config(R"({"turbo": 1})"); }, "turbo"));
  CHECK(throws_mentioning([] { (void)sw::parse_config(R"({"alpha": 1.5})"); }, "alpha"));
  CHECK(throws_mentioning([] { (void)sw::parse_config(R"({"m": 2.5})"); }, "integer"));
  CHECK(throws_mentioning([] { (void)sw::parse_config(R"({"alpha": "half"})"); }, "number"));
  CHECK(throws_mentioning(
      [] { (void)sw::parse_config(R"({"mc": {"trials": 0}})"); }, "trials"));
  CHECK(throws_mentioning(
      [] { (void)sw::parse_config(R"({"mc": {"speed": 3}})"); }, "mc.speed"));
}

TEST_CASE("config parsing assembles a sweep specification") {
  const auto parsed = sw::parse_config(R"({
    "r_rate": 2.0,
    "mc": {"trials": 5000, "seed": 9, "workers": 2},
    "sweep": {"axis": "m", "values": [2, 4, 8], "engines": ["analytic", "mc"]}
  })");
  REQUIRE(parsed.sweep.has_value());
  const auto& spec = *parsed.sweep;
  CHECK(spec.axis == "m");
  CHECK(spec.values == std::vector<double>{2.0, 4.0, 8.0});
  CHECK(spec.engine_analytic);
  CHECK(spec.engine_mc);
  CHECK(spec.fixed.r_rate == 2.0);  // base fields flow into the sweep
  CHECK(spec.mc.trials == 5000);
  CHECK(spec.mc.seed == 9);
  CHECK(spec.mc.workers == 2);

  SUBCASE("engine list can narrow to one engine") {
    const auto only_mc = sw::parse_config(
        R"({"sweep": {"axis": "m", "values": [2], "engines": ["mc"]}})");
    CHECK_FALSE(only_mc.sweep->engine_analytic);
    CHECK(only_mc.sweep->engine_mc);
  }
  SUBCASE("sweep object is policed") {
    CHECK(throws_mentioning(
        [] { (void)sw::parse_config(R"({"sweep": {"axis": "m"}})"); }, "values"));
    CHECK(throws_mentioning(
        [] { (void)sw::parse_config(R"({"sweep": {"values": [1]}})"); }, "axis"));
    CHECK(throws_mentioning(
        [] {
          (void)sw::parse_config(R"({"sweep": {"axis": "eta", "values": [0.5]}})");
        },
        "sweepable"));
    CHECK(throws_mentioning(
        [] {
          (void)sw::parse_config(R"({"sweep": {"axis": "m", "values": []}})");
        },
        "nonempty"));
    CHECK(throws_mentioning(
        [] {
          (void)sw::parse_config(
              R"({"sweep": {"axis": "m", "values": [1], "engines": ["magic"]}})");
        },
        "analytic"));
    CHECK(throws_mentioning(
        [] {
          (void)sw::parse_config(R"({"sweep": {"axis": "m", "values": [1], "mode": "x"}})");
        },
        "sweep.mode"));
  }
}

TEST_CASE("per-point seeds are deterministic and distinct") {
  CHECK(sw::point_seed(42, 0) == sw::point_seed(42, 0));
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 100; ++i) {
    seen.insert(sw::point_seed(42, i));
  }
  CHECK(seen.size() == 100);
  CHECK(seen.count(42) == 0);
  CHECK(sw::point_seed(1, 0) != sw::point_seed(2, 0));
}

TEST_CASE("sweep evaluates points in input order") {
  auto spec = analytic_sweep("m", {1, 2, 4, 8});
  spec.fixed.k_nodes = 400;
  const auto records = sw::run_sweep(spec);
  REQUIRE(records.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(records[i].point.m == static_cast<int>(spec.values[i]));
    CHECK(records[i].error.empty());
    REQUIRE(records[i].p_out_analytic.has_value());
    REQUIRE(records[i].p_raw.has_value());
    CHECK_FALSE(records[i].p_out_mc.has_value());
    CHECK_FALSE(records[i].trials.has_value());
  }
  // more elements cannot hurt
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(*records[i].p_out_analytic <= *records[i - 1].p_out_analytic + 1e-12);
  }
}

TEST_CASE("sweep amplification axis moves the probability the right way") {
  auto spec = analytic_sweep("rho_db", {0.0, 10.0});
  spec.fixed.m = 50;
  spec.fixed.k_nodes = 400;
  const auto records = sw::run_sweep(spec);
  REQUIRE(records.size() == 2);
  CHECK(*records[1].p_out_analytic <= *records[0].p_out_analytic + 1e-12);
}

TEST_CASE("sweep captures per-point failures without aborting the run") {
  const auto records = sw::run_sweep(analytic_sweep("alpha", {0.5, 1.5, 0.25}));
  REQUIRE(records.size() == 3);
  CHECK(records[0].error.empty());
  CHECK(records[2].error.empty());
  CHECK_FALSE(records[1].error.empty());
  CHECK(records[1].error.find("alpha") != std::string::npos);
  CHECK_FALSE(records[1].p_out_analytic.has_value());
  CHECK(records[0].p_out_analytic.has_value());

  const auto bad_int = sw::run_sweep(analytic_sweep("m", {2.5}));
  REQUIRE(bad_int.size() == 1);
  CHECK(bad_int[0].error.find("integer") != std::string::npos);
}

TEST_CASE("sweep attaches the per-point mc provenance") {
  sw::SweepSpec spec = analytic_sweep("m", {4, 8});
  spec.engine_mc = true;
  spec.mc.trials = 2000;
  spec.mc.seed = 5;
  const auto records = sw::run_sweep(spec);
  REQUIRE(records.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    REQUIRE(records[i].p_out_mc.has_value());
    REQUIRE(records[i].mc_stderr.has_value());
    CHECK(*records[i].trials == 2000);
    CHECK(*records[i].seed == sw::point_seed(5, i));
  }
}

TEST_CASE("sweep rejects an unusable specification") {
  CHECK_THROWS_AS((void)sw::run_sweep(analytic_sweep("eta", {0.5})), std::invalid_argument);
  CHECK_THROWS_AS((void)sw::run_sweep(analytic_sweep("m", {})), std::invalid_argument);
  auto no_engines = analytic_sweep("m", {4});
  no_engines.engine_analytic = false;
  CHECK_THROWS_AS((void)sw::run_sweep(no_engines), std::invalid_argument);
}

TEST_CASE("sweeps are reproducible end to end") {
  sw::SweepSpec spec = analytic_sweep("m", {2, 4, 8, 16});
  spec.engine_mc = true;
  spec.mc.trials = 2000;
  spec.mc.seed = 7;
  spec.fixed.k_nodes = 300;
  const std::string first = sw::to_csv(sw::run_sweep(spec));
  const std::string second = sw::to_csv(sw::run_sweep(spec));
  CHECK(first == second);
}

TEST_CASE("csv header is the frozen interface") {
  CHECK(std::string(sw::kCsvHeader) ==
        "m,rho_db,p_ps_dbm,alpha,eta,tau_c,r_rate,zeta1_db,zeta2_db,"
        "sigma_b_dbm,sigma_r_dbm,k_nodes,p_out_analytic,p_raw,p_out_mc,"
        "mc_stderr,trials,seed");
}

TEST_CASE("csv output round-trips") {
  sw::SweepSpec spec = analytic_sweep("m", {4, 8});
  spec.engine_mc = true;
  spec.mc.trials = 1000;
  const auto records = sw::run_sweep(spec);
  const std::string csv = sw::to_csv(records);

  // shape: header plus one line per record, 18 fields each
  const auto first_newline = csv.find('\n');
  CHECK(csv.substr(0, first_newline) == sw::kCsvHeader);
  const auto rows = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(rows == records.size() + 1);

  const auto parsed = sw::parse_csv(csv);
  REQUIRE(parsed.size() == records.size());
  CHECK(sw::to_csv(parsed) == csv);  // stable after one quantization
  CHECK(parsed[0].point.m == 4);
  CHECK(parsed[1].point.m == 8);
  // 10 significant digits survive the text round-trip
  CHECK(*parsed[0].p_out_analytic ==
        doctest::Approx(*records[0].p_out_analytic).epsilon(1e-9));

  SUBCASE("failed points serialize with empty engine fields") {
    const auto failed = sw::run_sweep(analytic_sweep("alpha", {1.5}));
    const std::string csv_failed = sw::to_csv(failed);
    const auto reparsed = sw::parse_csv(csv_failed);
    REQUIRE(reparsed.size() == 1);
    CHECK_FALSE(reparsed[0].p_out_analytic.has_value());
    CHECK(sw::to_csv(reparsed) == csv_failed);
  }
}

TEST_CASE("csv parsing rejects structural damage") {
  CHECK_THROWS_AS((void)sw::parse_csv("nope\n1,2,3\n"), std::invalid_argument);
  const std::string header = sw::kCsvHeader;
  CHECK_THROWS_AS((void)sw::parse_csv(header + "\n1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(
      (void)sw::parse_csv(header + "\nx,0,10,0.5,0.9,1,1.4,0,0,0,-80,200,,,,,,\n"),
      std::invalid_argument);
}

TEST_CASE("json output is lossless") {
  sw::SweepSpec spec = analytic_sweep("m", {4, 8});
  spec.engine_mc = true;
  spec.mc.trials = 1000;
  auto records = sw::run_sweep(spec);
  records.push_back(sw::run_sweep(analytic_sweep("alpha", {1.5}))[0]);  // an error row

  const std::string text = sw::to_json(records);
  CHECK(text.front() == '[');
  CHECK(text.back() == '\n');

  const auto parsed = sw::parse_json(text);
  REQUIRE(parsed.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CAPTURE(i);
    CHECK(same_record(parsed[i], records[i]));  // exact doubles, not approximations
  }

  CHECK_THROWS_AS((void)sw::parse_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS((void)sw::parse_json(R"([{"bogus": 1}])"), std::invalid_argument);
}

TEST_CASE("record writer guards the stream") {
  CHECK_THROWS_AS(sw::write_records({}, sw::Format::csv, std::cout), std::invalid_argument);
  const auto records = sw::run_sweep(analytic_sweep("m", {4}));
  std::ostringstream sink;
  sw::write_records(records, sw::Format::csv, sink);
  CHECK(sink.str() == sw::to_csv(records));
}

TEST_CASE("cross-validation passes honestly and catches a planted bug") {
  ap::SystemParams base;
  sw::ValidateOptions opts;
  opts.trials = 4000;
  opts.seed = 42;

  const auto honest = sw::validate_command(base, opts);
  CHECK(honest.pass);
  REQUIRE(honest.points.size() == 10);
  for (const auto& point : honest.points) {
    CHECK(point.tolerance >= 0.02);
    CHECK_FALSE(point.informational);
    CHECK(point.pass);
  }

  SUBCASE("m = 1 rows are appended as informational only") {
    auto with_m1 = opts;
    with_m1.include_m1 = true;
    const auto report = sw::validate_command(base, with_m1);
    REQUIRE(report.points.size() == 12);
    CHECK(report.points[10].m == 1);
    CHECK(report.points[11].m == 1);
    CHECK(report.points[10].informational);
    CHECK(report.points[11].informational);
    // the gating points keep their seeds (and therefore their numbers)
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(report.points[i].p_mc == honest.points[i].p_mc);
    }
  }

  SUBCASE("a wrong-base threshold is flagged loudly") {
    auto sabotaged = opts;
    sabotaged.trials = 1000;
    sabotaged.inject_delta_bug = true;
    const auto report = sw::validate_command(base, sabotaged);
    CHECK_FALSE(report.pass);
    // The wrong base inflates the threshold ~105x; at small m that shifts
    // the probability by 0.1..0.8, far outside tolerance. At m >= 64 with
    // 10 dB amplification the outage is pinned near zero on both sides,
    // so those points cannot discriminate.
    int failing = 0;
    for (const auto& point : report.points) {
      if (!point.pass) {
        ++failing;
      }
    }
    CHECK(failing >= 4);
    CHECK_FALSE(report.points[0].pass);  // m=8, rho=0: the loudest point
  }
}
