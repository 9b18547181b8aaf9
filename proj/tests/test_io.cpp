#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "fbvtrack/io.hpp"

using namespace fbv;
using namespace fbv::io;
using Catch::Approx;

TEST_CASE("trace JSON round trip is exact", "[io]") {
  const auto cfg = scenario::psystem_small();
  const auto tr = scenario::run_config(cfg);
  const auto j = trace_to_json(tr);
  const auto tr2 = trace_from_json(j);

  REQUIRE(tr2.fronts.size() == tr.fronts.size());
  REQUIRE(tr2.events.size() == tr.events.size());
  for (std::size_t i = 0; i < tr.fronts.size(); ++i) {
    CHECK(tr2.fronts[i].sigma == tr.fronts[i].sigma);
    CHECK(tr2.fronts[i].speed == tr.fronts[i].speed);
    CHECK(tr2.fronts[i].left_state == tr.fronts[i].left_state);
    CHECK(tr2.fronts[i].death_time == tr.fronts[i].death_time);
  }
  // serialization is deterministic byte for byte
  CHECK(trace_to_string(tr) == trace_to_string(tr2));

  // re-read trace analyzes to identical reports
  const auto v1 = functionals::build_horizon(tr, tr.end_time, cfg.p);
  const auto v2 = functionals::build_horizon(tr2, tr2.end_time, cfg.p);
  const auto r1 = functionals::monitor_decay(v1, cfg.C1, cfg.C2);
  const auto r2 = functionals::monitor_decay(v2, cfg.C1, cfg.C2);
  REQUIRE(r1.times.size() == r2.times.size());
  for (std::size_t k = 0; k < r1.times.size(); ++k) {
    CHECK(r1.upsilon[k] == r2.upsilon[k]);
    CHECK(r1.vp[k] == r2.vp[k]);
  }
}

TEST_CASE("unknown schema versions are rejected loudly", "[io]") {
  json j;
  j["schema"] = "fbv-trace-v999";
  CHECK_THROWS_AS(trace_from_json(j), InvalidInputError);
  json c;
  c["schema"] = "something-else";
  CHECK_THROWS_AS(config_from_json(c), InvalidInputError);
  CHECK_THROWS_AS(config_from_json(json::object()), InvalidInputError);
}

TEST_CASE("config JSON round trip", "[io]") {
  const auto cfg = scenario::psystem_small();
  const auto j = config_to_json(cfg);
  const auto cfg2 = config_from_json(j);
  CHECK(cfg2.name == cfg.name);
  CHECK(cfg2.nu == cfg.nu);
  CHECK(cfg2.p == cfg.p);
  CHECK(cfg2.initial.xs == cfg.initial.xs);
  REQUIRE(cfg2.initial.values.size() == cfg.initial.values.size());
  for (std::size_t i = 0; i < cfg.initial.values.size(); ++i)
    CHECK(cfg2.initial.values[i] == cfg.initial.values[i]);
  // invalid nu is rejected by validation
  auto bad = j;
  bad["nu"] = 0.0;
  CHECK_THROWS_AS(scenario::validate(config_from_json(bad)), InvalidInputError);
}

TEST_CASE("report and snapshot CSV shapes", "[io]") {
  const auto cfg = scenario::psystem_small();
  const auto tr = scenario::run_config(cfg);
  const auto v = functionals::build_horizon(tr, tr.end_time, cfg.p);
  const auto rep = functionals::monitor_decay(v, cfg.C1, cfg.C2);

  const std::string csv = "/tmp/fbv_test_report.csv";
  write_report_csv(csv, rep);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "time,V1,V2,Q1,Q2,Q3,Upsilon,Vp,Vp_tilde");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == rep.times.size());
  std::remove(csv.c_str());

  // empty trace: header-only files
  pvar::StepFn2 constant;
  constant.values.push_back(Vec2{1.0, 0.0});
  tracking::RunConfigLite lite;
  lite.nu = 0.02;
  lite.c_star = 4.0;
  const auto empty_tr = tracking::run(model::builtin_p_system(2.0, {1.0, 0.0}), constant, lite);
  const std::string snaps = "/tmp/fbv_test_snaps.csv";
  write_snapshots_csv(snaps, empty_tr, 1.25);
  std::ifstream in2(snaps);
  std::getline(in2, header);
  CHECK(header == "time,front_count,Vp,Vp_tilde");
  rows = 0;
  for (std::string line; std::getline(in2, line);) ++rows;
  CHECK(rows == 1);  // the t = 0 row
  std::remove(snaps.c_str());
}
