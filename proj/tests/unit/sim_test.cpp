/*
 * Copyright 2026 The expresslog Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <set>

#include "analysis/kappa.hpp"
#include "core/codec.hpp"
#include "core/error.hpp"
#include "sim/fixtures.hpp"
#include "sim/reproduce.hpp"
#include "sim/same_room.hpp"
#include "sim/scenario.hpp"
#include "sim/simulate.hpp"
#include "support/test_support.hpp"

using namespace exl;
using namespace exl::sim;

namespace {

const std::filesystem::path kData = EXL_DATA_DIR;

std::size_t error_slots(const core::DataRecord& r, core::Source source) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < core::kSlotCount; ++i) {
    n += core::kSlotSpecs[i].source == source && !r.slots[i].has_value();
  }
  return n;
}

core::Json minimal_scenario() {
  return core::Json::parse(R"({
    "name": "t", "seed": 3,
    "floor_plan": {"grid": {"columns": 2, "rows": 1}},
    "device_path": [{"at_ms": 0, "position": [4.0, 4.0]}],
    "clicks": [{"at_ms": 1000, "behavior_name": "Goodbye"}]
  })");
}

std::vector<std::string> schema_problems(const core::Json& doc) {
  try {
    parse_scenario(doc).validate();
  } catch (const SchemaError& e) {
    return e.diagnostics();
  }
  return {};
}

bool mentions(const std::vector<std::string>& diags, std::string_view what) {
  for (const auto& d : diags) {
    if (d.find(what) != std::string::npos) return true;
  }
  return false;
}

const CheckResult& check_named(const std::vector<CheckResult>& checks, std::string_view name) {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  FAIL("no check named " << name);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("minimal document parses with defaults") {
    const auto sc = parse_scenario(minimal_scenario());
    sc.validate();
    CHECK(sc.seed == 3);
    CHECK(sc.clicks.size() == 1);
    CHECK(sc.clicks[0].behavior_name == "Goodbye");
    CHECK(sc.freshness_window_ms == 30'000);
    CHECK(sc.weather == SimWeather::kSimulated);
  }

  TEST_CASE("every problem is reported at once") {
    auto doc = minimal_scenario();
    doc["clicks"] = core::Json::parse(
        R"([{"at_ms": 5000, "behavior_name": "Goodbye"}, {"at_ms": 100, "behavior_name": "Juggling"}])");
    doc["noise_sigma_db"] = -1;
    doc["faults"] = core::Json::parse(R"([{"source": "gps", "from_ms": 10, "to_ms": 10}])");
    const auto diags = schema_problems(doc);
    CHECK(mentions(diags, "clicks[1]: time goes backwards"));
    CHECK(mentions(diags, "unresolved behavior 'Juggling'"));
    CHECK(mentions(diags, "noise_sigma_db"));
    CHECK(mentions(diags, "faults[0]: empty window"));
  }

  TEST_CASE("bad fields are schema errors") {
    auto doc = minimal_scenario();
    doc["weather"] = {{"mode", "cloudy"}};
    CHECK_THROWS_AS(parse_scenario(doc), Error);
    doc = minimal_scenario();
    doc["faults"] = core::Json::parse(R"([{"source": "radio", "from_ms": 0, "to_ms": 10}])");
    CHECK_THROWS_AS(parse_scenario(doc), SchemaError);
    doc = minimal_scenario();
    doc["clicks"][0]["at_ms"] = "soon";
    CHECK_THROWS_AS(parse_scenario(doc), SchemaError);
  }

  TEST_CASE("fixture weather needs a directory") {
    auto doc = minimal_scenario();
    doc["weather"] = {{"mode", "fixture"}};
    CHECK(mentions(schema_problems(doc), "fixture_dir"));
  }

  TEST_CASE("loading from disk") {
    testing::TempDir dir;
    CHECK_THROWS_AS(load_scenario(dir / "absent.json"), Error);
    core::write_text_file(dir / "broken.json", "{\"name\": ");
    try {
      (void)load_scenario(dir / "broken.json");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
    }
    for (const char* name : {"ten_clicks", "classroom_walk", "weather_outage", "effectively_once"}) {
      CHECK_NOTHROW(load_scenario(kData / "scenarios" / (std::string(name) + ".json")));
    }
  }

  TEST_CASE("fault windows are half open") {
    FaultWindow w{FaultTarget::kGps, 100, 200};
    CHECK_FALSE(w.covers(99));
    CHECK(w.covers(100));
    CHECK(w.covers(199));
    CHECK_FALSE(w.covers(200));
  }

  TEST_CASE("device position interpolates along the path") {
    auto sc = parse_scenario(minimal_scenario());
    sc.device_path = {{0, {0, 0}}, {1000, {10, 0}}};
    CHECK(sc.device_at(500).x == doctest::Approx(5.0));
    CHECK(sc.device_at(-10).x == doctest::Approx(0.0));
    CHECK(sc.device_at(5000).x == doctest::Approx(10.0));
  }
}

TEST_SUITE("simulate") {
  TEST_CASE("ten clicks without faults") {
    const auto sc = load_scenario(kData / "scenarios/ten_clicks.json");
    REQUIRE(sc.clicks.size() == 10);
    const auto res = run_simulation(sc);
    CHECK(res.records.size() == 10);
    CHECK(res.store_count == 10);
    CHECK(res.distinct_store_event_ids == 10);
    for (const auto& r : res.records) CHECK(r.value_count() == 31);
    CHECK(res.pending == 0);
    CHECK(res.failed == 0);
  }

  TEST_CASE("weather outage touches exactly the covered clicks") {
    const auto sc = load_scenario(kData / "scenarios/weather_outage.json");
    std::set<std::size_t> covered;
    for (std::size_t i = 0; i < sc.clicks.size(); ++i) {
      if (sc.outage(FaultTarget::kWeather, sc.clicks[i].at_ms)) covered.insert(i);
    }
    CHECK(covered.size() == 3);
    const auto res = run_simulation(sc);
    REQUIRE(res.records.size() == sc.clicks.size());
    for (std::size_t i = 0; i < res.records.size(); ++i) {
      const auto expected = covered.contains(i) ? 15u : 0u;
      CHECK(error_slots(res.records[i], core::Source::kWeather) == expected);
    }
    const auto& loss = res.loss[static_cast<std::size_t>(core::Source::kWeather)];
    CHECK(loss.records_missing == 3);
    CHECK(loss.error_slots == 45);
  }

  TEST_CASE("same scenario twice is byte identical") {
    const auto sc = load_scenario(kData / "scenarios/classroom_walk.json");
    const auto a = run_simulation(sc);
    const auto b = run_simulation(sc);
    CHECK(a.events_text == b.events_text);
    CHECK(a.store_text == b.store_text);
    CHECK(loss_summary_text(a, sc) == loss_summary_text(b, sc));
  }

  TEST_CASE("a different seed changes the data") {
    const auto sc = load_scenario(kData / "scenarios/classroom_walk.json");
    SimulationOptions opts;
    opts.seed = 777;
    CHECK(run_simulation(sc).events_text != run_simulation(sc, opts).events_text);
  }

  TEST_CASE("store outage still ends with one copy per click") {
    const auto sc = load_scenario(kData / "scenarios/effectively_once.json");
    std::size_t in_outage = 0;
    for (const auto& c : sc.clicks) in_outage += sc.outage(FaultTarget::kStore, c.at_ms);
    CHECK(sc.clicks.size() == 50);
    CHECK(in_outage == 20);
    const auto res = run_simulation(sc);
    CHECK(res.records.size() == 50);
    CHECK(res.store_count == 50);
    CHECK(res.distinct_store_event_ids == 50);
    CHECK(res.replay_mismatches == 0);
    CHECK(res.store_count_after_replay == 50);
    CHECK(res.acked == 50);
  }

  TEST_CASE("outputs land in the out directory") {
    testing::TempDir dir;
    const auto sc = load_scenario(kData / "scenarios/ten_clicks.json");
    SimulationOptions opts;
    opts.out_dir = dir.path();
    const auto res = run_simulation(sc, opts);
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir.path())) {
      (void)entry;
      ++files;
    }
    CHECK(files >= 3);
    CHECK(loss_summary_json(res, sc)["clicks"] == 10);
  }

  TEST_CASE("freshness override turns slow sources into gaps") {
    const auto sc = load_scenario(kData / "scenarios/classroom_walk.json");
    SimulationOptions opts;
    opts.freshness_window_ms = 1;
    const auto strict = run_simulation(sc, opts);
    const auto normal = run_simulation(sc);
    std::size_t strict_values = 0, normal_values = 0;
    for (const auto& r : strict.records) strict_values += r.value_count();
    for (const auto& r : normal.records) normal_values += r.value_count();
    CHECK(strict_values <= normal_values);
  }
}

TEST_SUITE("fixtures") {
  TEST_CASE("bundled files equal a fresh generation") {
    for (const auto& f : generate_fixtures()) {
      CAPTURE(f.relative.string());
      CHECK(core::read_text_file(kData / f.relative) == f.content);
    }
  }

  TEST_CASE("generation is stable and seed dependent") {
    const auto a = generate_fixtures(5);
    const auto b = generate_fixtures(5);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].content == b[i].content);
  }

  TEST_CASE("alignment fixture gives the reference labels for any seed") {
    for (std::uint64_t seed : {kFixtureSeed, std::uint64_t{1}, std::uint64_t{99}}) {
      const auto f = make_alignment_fixture(seed);
      const auto app = analysis::align(f.app, f.reference);
      const auto manual = analysis::align(f.manual, f.reference);
      CHECK(f.reference.size() == 301);
      CHECK(app.correct == 269);
      CHECK(app.missing_count() == 20);
      CHECK(app.incorrect == 12);
      CHECK(manual.correct == 195);
      CHECK(manual.missing_count() == 60);
      CHECK(manual.incorrect == 46);
    }
  }

  TEST_CASE("completeness records follow the shape") {
    const auto shape = reference_completeness_shape();
    const auto records = make_completeness_records();
    CHECK(records.size() == shape.records + shape.empty_records);
    for (std::size_t i = 0; i < core::kSlotCount; ++i) {
      std::size_t present = 0;
      for (const auto& r : records) present += !!r.slots[i].has_value();
      CHECK(present == shape.present[i]);
    }
  }

  TEST_CASE("score fixture totals and disagreements") {
    const auto f = make_score_fixture();
    CHECK(f.consensus.size() == kScoredEvents);
    core::MovementCounts totals{};
    for (const auto& e : f.consensus.entries()) {
      for (std::size_t k = 0; k < totals.size(); ++k) totals[k] += e.counts[k];
    }
    CHECK(totals == kReferenceMovementTotals);
    std::size_t disagreements = 0;
    for (const auto& e : f.rater1.entries()) {
      if (e.counts != f.rater2.counts(e.event_id)) {
        ++disagreements;
        CHECK(f.resolutions.contains(e.event_id));
      }
    }
    CHECK(disagreements == f.resolutions.size());
    CHECK(disagreements > 0);
    const auto report = analysis::kappa_report(f.rater1, f.rater2);
    CHECK(report.rows.size() == 22);
  }
}

TEST_SUITE("reproduction") {
  TEST_CASE("clean data passes every check") {
    const auto checks = run_reproduction(kData);
    CHECK(checks.size() == 9);
    for (const auto& c : checks) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.passed);
    }
    CHECK(all_passed(checks));
  }

  TEST_CASE("two runs print the same summary") {
    CHECK(render_checks(run_reproduction(kData)) == render_checks(run_reproduction(kData)));
  }

  TEST_CASE("a tampered count fails the named check") {
    testing::TempDir dir;
    std::filesystem::copy(kData, dir.path(), std::filesystem::copy_options::recursive);
    const auto path = dir / "fixtures/scores/consensus.jsonl";
    std::string text = core::read_text_file(path);
    const auto pos = text.find("\"c\":1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 5, "\"c\":2");
    core::write_text_file(path, text);

    const auto checks = run_reproduction(dir.path());
    CHECK_FALSE(all_passed(checks));
    CHECK_FALSE(check_named(checks, "frequency").passed);
    CHECK(check_named(checks, "chi-square").passed);
    CHECK(render_checks(checks).find("FAIL frequency") != std::string::npos);
  }

  TEST_CASE("a tampered rater sheet no longer merges to the consensus") {
    testing::TempDir dir;
    std::filesystem::copy(kData, dir.path(), std::filesystem::copy_options::recursive);
    const auto path = dir / "fixtures/scores/rater1.jsonl";
    std::string text = core::read_text_file(path);
    const auto line_end = text.find('\n');
    const auto pos = text.rfind("\"f.3\":", line_end);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 7, "\"f.3\":9");
    core::write_text_file(path, text);
    const auto& freq = check_named(run_reproduction(dir.path()), "frequency");
    CHECK_FALSE(freq.passed);
  }

  TEST_CASE("a tampered completeness record fails its check") {
    testing::TempDir dir;
    std::filesystem::copy(kData, dir.path(), std::filesystem::copy_options::recursive);
    const auto path = dir / "fixtures/completeness/records.jsonl";
    std::string text = core::read_text_file(path);
    const auto pos = text.find("\"A14\":{\"error\"");
    REQUIRE(pos != std::string::npos);
    const auto end = text.find('}', pos);
    text.replace(pos, end + 1 - pos, "\"A14\":1.0");
    core::write_text_file(path, text);
    const auto checks = run_reproduction(dir.path());
    CHECK_FALSE(check_named(checks, "completeness").passed);
    CHECK(check_named(checks, "frequency").passed);
  }

  TEST_CASE("missing data fails checks instead of throwing") {
    testing::TempDir dir;
    const auto checks = run_reproduction(dir.path());
    CHECK_FALSE(all_passed(checks));
    CHECK(checks_json(checks)["passed"] == false);
  }
}

TEST_SUITE("same room") {
  TEST_CASE("no shadowing is always right") {
    SameRoomParams p;
    p.noise_sigma_db = 0;
    p.scans = 2000;
    const auto r = same_room_accuracy(p);
    CHECK(r.matches == r.scans);
  }

  TEST_CASE("accuracy band with shadowing") {
    SameRoomParams p;
    p.seed = 42;
    CHECK(same_room_accuracy(p).rate() >= 0.93);
  }

  TEST_CASE("accuracy drops as shadowing grows") {
    SameRoomParams p;
    p.scans = 4000;
    p.noise_sigma_db = 4;
    const double low = same_room_accuracy(p).rate();
    p.noise_sigma_db = 12;
    const double high = same_room_accuracy(p).rate();
    CHECK(high < low);
  }

  TEST_CASE("same seed, same count") {
    SameRoomParams p;
    p.scans = 500;
    CHECK(same_room_accuracy(p).matches == same_room_accuracy(p).matches);
  }
}
