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

#include "sim/fixtures.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "core/codec.hpp"
#include "core/error.hpp"
#include "core/registry.hpp"
#include "sensors/propagation.hpp"
#include "sensors/snapshot.hpp"
#include "sensors/simulated.hpp"
#include "sensors/weather.hpp"

namespace exl::sim {

namespace {

constexpr TimestampMs kFixtureStartMs = 1'684'540'800'000;  // 2023-05-20T00:00:00Z
constexpr double kLatitude = 34.79;
constexpr double kLongitude = 132.78;

// Fisher-Yates and bounded draws written out so fixtures do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.shuffle(idx);
  return idx;
}

std::vector<std::string> behavior_names() {
  std::vector<std::string> names;
  for (const auto& d : core::default_registry().definitions()) names.push_back(d.behavior_name);
  return names;
}

std::vector<analysis::CandidateEntry> candidates_for(
    const std::vector<analysis::ReferenceEntry>& reference, std::size_t missing,
    std::size_t incorrect, const std::vector<std::string>& names, Rng& rng) {
  const auto order = shuffled_indices(reference.size(), rng);
  std::vector<analysis::CandidateEntry> out;
  for (std::size_t k = missing; k < order.size(); ++k) {
    const auto& ref = reference[order[k]];
    analysis::CandidateEntry c{ref.behavior_name, ref.occurred_at + rng.between(-2000, 2000)};
    if (k < missing + incorrect) {
      do {
        c.behavior_name = names[rng.below(names.size())];
      } while (c.behavior_name == ref.behavior_name);
    }
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.at < b.at; });
  return out;
}

std::string candidates_text(const std::vector<analysis::CandidateEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    core::Json j = core::Json::object();
    j["behavior_name"] = e.behavior_name;
    j["at"] = e.at;
    out += j.dump() + "\n";
  }
  return out;
}

std::string reference_text(const std::vector<analysis::ReferenceEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    core::Json j = core::Json::object();
    j["behavior_name"] = e.behavior_name;
    j["occurred_at"] = e.occurred_at;
    out += j.dump() + "\n";
  }
  return out;
}

std::string records_text(const std::vector<core::DataRecord>& records) {
  std::string out;
  for (const auto& r : records) out += core::record_line(r) + "\n";
  return out;
}

std::string sheet_text(const core::RaterScoreSheet& sheet) { return core::score_sheet_text(sheet); }

std::string resolutions_text(const ScoreFixture& f) {
  std::string out;
  // Resolutions follow the event order of the consensus sheet.
  for (const auto& e : f.consensus.entries()) {
    auto it = f.resolutions.find(e.event_id);
    if (it == f.resolutions.end()) continue;
    core::Json j = core::encode_score_entry("resolution", {e.event_id, it->second});
    j.erase("rater_id");
    j.erase("majors");
    out += j.dump() + "\n";
  }
  return out;
}

core::Json click_list(std::size_t count, TimestampMs interval_ms, std::uint64_t seed) {
  const auto registry = core::default_registry();
  const auto defs = registry.definitions();
  Rng rng(seed);
  core::Json clicks = core::Json::array();
  for (std::size_t i = 1; i <= count; ++i) {
    const auto& d = defs[rng.below(defs.size())];
    clicks.push_back({{"at_ms", static_cast<TimestampMs>(i) * interval_ms},
                      {"behavior_name", d.behavior_name},
                      {"category_name", d.category_name}});
  }
  return clicks;
}

core::Json grid_plan() {
  return {{"grid",
           {{"columns", 4},
            {"rows", 2},
            {"room_width_m", 8.0},
            {"room_depth_m", 8.0},
            {"wall_db", 15.0},
            {"tx_power_dbm", -59.0}}}};
}

core::Json scenario_doc(const std::string& name, std::uint64_t seed, core::Json clicks,
                        core::Json faults, core::Json path) {
  core::Json doc = core::Json::object();
  doc["name"] = name;
  doc["seed"] = seed;
  doc["device_id"] = "sim-device";
  doc["start_ms"] = kFixtureStartMs;
  doc["freshness_window_ms"] = sensors::kDefaultFreshnessWindowMs;
  doc["location_label"] = "classroom 2";
  doc["noise_sigma_db"] = 4.0;
  doc["detect_floor_dbm"] = -95.0;
  doc["floor_plan"] = grid_plan();
  doc["device_path"] = std::move(path);
  doc["gps"] = {{"latitude", kLatitude}, {"longitude", kLongitude}};
  doc["weather"] = {{"mode", "simulated"}};
  doc["clicks"] = std::move(clicks);
  doc["faults"] = std::move(faults);
  return doc;
}

core::Json still_path() {
  // Inside room2 (x 8..16, y 0..8), 2 m from its beacon.
  return core::Json::array({{{"at_ms", 0}, {"position", {12.0, 6.0}}}});
}

}  // namespace

AlignmentFixture make_alignment_fixture(std::uint64_t seed) {
  Rng rng(sensors::mix_seed(seed, 10));
  const auto names = behavior_names();
  AlignmentFixture f;
  for (std::size_t i = 0; i < 301; ++i) {
    f.reference.push_back({names[rng.below(names.size())],
                           kFixtureStartMs + static_cast<TimestampMs>(i) * 60'000});
  }
  f.app = candidates_for(f.reference, 20, 12, names, rng);
  f.manual = candidates_for(f.reference, 60, 46, names, rng);
  return f;
}

CompletenessShape reference_completeness_shape() {
  CompletenessShape shape;
  const std::array<std::size_t, core::kSlotCount> present = {
      269, 269, 269,                                           // iB1-iB3
      327, 327,                                                // GPS1-GPS2
      213, 318, 318, 319, 320, 318, 321, 266, 327, 327, 327,   // S1-S11
      312, 312, 312, 312, 312, 312, 312, 312, 312, 312, 312,   // A1-A11
      312, 312, 288, 312};                                     // A12-A15
  shape.present = present;
  return shape;
}

std::vector<core::DataRecord> make_completeness_records(std::uint64_t seed) {
  const auto shape = reference_completeness_shape();
  Rng rng(sensors::mix_seed(seed, 20));
  const auto registry = core::default_registry();
  const auto defs = registry.definitions();
  const auto layout = sensors::make_classroom_grid(4, 2, 8.0, 8.0, 15.0);
  const sensors::GpsSimulator gps{kLatitude, kLongitude, 0.0001, sensors::mix_seed(seed, 21)};
  const sensors::EnvSimulator env{sensors::mix_seed(seed, 22)};
  const sensors::WeatherPayloadSimulator weather{sensors::mix_seed(seed, 23)};
  const std::string session = fmt::format("s1-{}", kFixtureStartMs);

  std::vector<core::DataRecord> records;
  const std::size_t total = shape.records + shape.empty_records;
  for (std::size_t i = 0; i < total; ++i) {
    const TimestampMs t = kFixtureStartMs + static_cast<TimestampMs>(i) * 90'000;
    core::SensorSnapshot snap;
    snap.assembled_at = t;
    if (i < shape.records) {
      const auto& beacon = layout.placements[rng.below(layout.placements.size())];
      snap.beacons.push_back(
          {beacon.uuid, static_cast<int>(rng.between(-78, -58)), beacon.beacon_name, t});
      snap.gps = gps.sample(t);
      snap.env = env.sample(t);
      snap.weather = sensors::parse_weather_payload(
          nlohmann::json::parse(weather.payload_json(kLatitude, kLongitude, t)), t,
          core::WeatherSourceMode::kFixture);
    }
    const auto& def = defs[rng.below(defs.size())];
    records.push_back(core::flatten_record(
        fmt::format("fixture-device/{}/{:05}", session, i + 1), session, def, t, snap));
  }

  auto knock_out = [&](std::size_t slot, const std::vector<std::size_t>& which, core::SlotError e) {
    for (std::size_t r : which) records[r].slots[slot] = core::Slot::error(e);
  };
  auto pick = [&](std::size_t count, const std::vector<std::size_t>& from) {
    auto pool = from;
    rng.shuffle(pool);
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
  };
  std::vector<std::size_t> audited(shape.records);
  std::iota(audited.begin(), audited.end(), std::size_t{0});

  // Beacon: the whole source is absent for the same records.
  const auto no_beacon = pick(shape.records - shape.present[0], audited);
  for (std::size_t s = 0; s < 3; ++s) knock_out(s, no_beacon, core::SlotError::kSourceUnavailable);

  // GPS and environment: each type independently.
  for (std::size_t s = 3; s < 16; ++s) {
    knock_out(s, pick(shape.records - shape.present[s], audited), core::SlotError::kFieldMissing);
  }

  // Weather: the least-present parameter other than A14 marks whole-source
  // outages; A14 then loses its extra share among the remaining records.
  const auto weather_slots = core::source_range(core::Source::kWeather);
  const std::size_t a14 = *core::slot_index("A14");
  std::size_t common = 0;
  for (std::size_t s = weather_slots.first; s < weather_slots.first + weather_slots.count; ++s) {
    if (s != a14) common = std::max(common, shape.records - shape.present[s]);
  }
  const auto no_weather = pick(common, audited);
  for (std::size_t s = weather_slots.first; s < weather_slots.first + weather_slots.count; ++s) {
    knock_out(s, no_weather, core::SlotError::kSourceUnavailable);
  }
  std::vector<std::size_t> with_weather;
  std::set_difference(audited.begin(), audited.end(), no_weather.begin(), no_weather.end(),
                      std::back_inserter(with_weather));
  knock_out(a14, pick(shape.records - shape.present[a14] - common, with_weather),
            core::SlotError::kFieldMissing);
  return records;
}

ScoreFixture make_score_fixture(std::uint64_t seed) {
  Rng rng(sensors::mix_seed(seed, 30));
  std::vector<std::size_t> units;
  for (std::size_t k = 0; k < core::kScoreKeyCount; ++k) {
    units.insert(units.end(), kReferenceMovementTotals[k], k);
  }
  rng.shuffle(units);

  std::vector<core::MovementCounts> counts(kScoredEvents, core::MovementCounts{});
  for (std::size_t u = 0; u < units.size(); ++u) {
    const std::size_t event = u < kScoredEvents ? u : rng.below(kScoredEvents);
    ++counts[event][units[u]];
  }

  ScoreFixture f;
  f.consensus = core::RaterScoreSheet("consensus");
  f.rater1 = core::RaterScoreSheet("rater1");
  f.rater2 = core::RaterScoreSheet("rater2");
  std::vector<core::MovementCounts> r1 = counts, r2 = counts;
  const auto order = shuffled_indices(kScoredEvents, rng);
  auto perturb = [&](core::MovementCounts& c) {
    const std::size_t k = rng.below(core::kScoreKeyCount);
    c[k] = c[k] > 0 ? c[k] - 1 : 1;
  };
  for (std::size_t i = 0; i < 20; ++i) perturb(r1[order[i]]);
  for (std::size_t i = 20; i < 45; ++i) perturb(r2[order[i]]);

  for (std::size_t e = 0; e < kScoredEvents; ++e) {
    const std::string id = fmt::format("ev-{:04}", e + 1);
    f.consensus.add(id, counts[e]);
    f.rater1.add(id, r1[e]);
    f.rater2.add(id, r2[e]);
    if (r1[e] != r2[e]) f.resolutions.emplace(id, counts[e]);
  }
  return f;
}

std::string weather_fixture_payload() {
  const sensors::WeatherPayloadSimulator sim{sensors::mix_seed(kFixtureSeed, 40)};
  return core::Json::parse(sim.payload_json(kLatitude, kLongitude, kFixtureStartMs)).dump(2) + "\n";
}

std::vector<FixtureFile> generate_fixtures(std::uint64_t seed) {
  std::vector<FixtureFile> files;
  const auto align = make_alignment_fixture(seed);
  files.push_back({"fixtures/alignment/reference.jsonl", reference_text(align.reference)});
  files.push_back({"fixtures/alignment/app_log.jsonl", candidates_text(align.app)});
  files.push_back({"fixtures/alignment/manual_log.jsonl", candidates_text(align.manual)});

  files.push_back({"fixtures/completeness/records.jsonl",
                   records_text(make_completeness_records(seed))});

  const auto scores = make_score_fixture(seed);
  files.push_back({"fixtures/scores/rater1.jsonl", sheet_text(scores.rater1)});
  files.push_back({"fixtures/scores/rater2.jsonl", sheet_text(scores.rater2)});
  files.push_back({"fixtures/scores/resolutions.jsonl", resolutions_text(scores)});
  files.push_back({"fixtures/scores/consensus.jsonl", sheet_text(scores.consensus)});

  files.push_back({"weather/" + sensors::fixture_key(kLatitude, kLongitude) + ".json",
                   weather_fixture_payload()});

  auto scenario = [&](const std::string& file, const core::Json& doc) {
    files.push_back({"scenarios/" + file, doc.dump(2) + "\n"});
  };
  scenario("ten_clicks.json", scenario_doc("ten-clicks", seed, click_list(10, 15'000, seed),
                                           core::Json::array(), still_path()));
  scenario("weather_outage.json",
           scenario_doc("weather-outage", seed, click_list(10, 15'000, seed),
                        core::Json::array({{{"source", "weather"},
                                            {"from_ms", 60'000},
                                            {"to_ms", 105'000}}}),
                        still_path()));
  scenario("effectively_once.json",
           scenario_doc("effectively-once", seed, click_list(50, 10'000, seed),
                        core::Json::array({{{"source", "store"},
                                            {"from_ms", 150'000},
                                            {"to_ms", 350'000}}}),
                        still_path()));
  auto walk = scenario_doc("classroom-walk", seed, core::Json::array(), core::Json::array(),
                           core::Json::array({{{"at_ms", 0}, {"position", {4.0, 4.0}}},
                                              {{"at_ms", 300'000}, {"position", {28.0, 4.0}}},
                                              {{"at_ms", 600'000}, {"position", {28.0, 12.0}}},
                                              {{"at_ms", 900'000}, {"position", {4.0, 12.0}}}}));
  walk.erase("clicks");
  walk["click_rate"] = {{"count", 40}, {"mean_interval_ms", 20'000}};
  walk["weather"] = {{"mode", "fixture"}, {"fixture_dir", "../weather"}};
  walk["faults"] = core::Json::array(
      {{{"source", "env"}, {"from_ms", 200'000}, {"to_ms", 260'000}},
       {{"source", "store"}, {"from_ms", 400'000}, {"to_ms", 520'000}}});
  scenario("classroom_walk.json", walk);
  return files;
}

void write_fixtures(const std::filesystem::path& data_dir, std::uint64_t seed) {
  for (const auto& f : generate_fixtures(seed)) {
    core::write_text_file(data_dir / f.relative, f.content);
  }
}

}  // namespace exl::sim
