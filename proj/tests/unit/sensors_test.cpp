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

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include <httplib.h>

#include "core/codec.hpp"
#include "core/error.hpp"
#include "sensors/propagation.hpp"
#include "sensors/proximity.hpp"
#include "sensors/simulated.hpp"
#include "sensors/snapshot.hpp"
#include "sensors/weather.hpp"
#include "sim/fixtures.hpp"
#include "support/test_support.hpp"

using namespace exl;
using namespace exl::sensors;

namespace {

BeaconPlacement placement_at(Point p, double tx = -59.0) {
  return {"U-1", "iB-1", p, tx};
}

// Two 10 m rooms side by side with a 15 dB wall at x = 10.
FloorPlan two_rooms(double wall_db = 15.0) {
  FloorPlan plan;
  plan.rooms = {{"r1", {0, 0}, {10, 10}}, {"r2", {10, 0}, {20, 10}}};
  plan.walls = {{{10, 0}, {10, 10}, wall_db}};
  return plan;
}

WeatherClientConfig config_for(WeatherMode mode, std::filesystem::path dir = {}) {
  WeatherClientConfig cfg;
  cfg.mode = mode;
  cfg.fixture_dir = std::move(dir);
  return cfg;
}

core::BeaconReading reading(const std::string& uuid, int rssi) { return {uuid, rssi, uuid, 0}; }

}  // namespace

TEST_SUITE("propagation") {
  TEST_CASE("reference distance returns the transmit power") {
    CHECK(rssi_at(placement_at({0, 0}), {1, 0}, {}, 0.0, 1) == doctest::Approx(-59.0));
  }

  TEST_CASE("two metres costs 20 log10 2") {
    const double expected = -59.0 - 20.0 * std::log10(2.0);
    CHECK(rssi_at(placement_at({0, 0}), {2, 0}, {}, 0.0, 1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(rssi_at(placement_at({0, 0}), {2, 0}, {}, 0.0, 1) - -65.02) <= 0.01);
  }

  TEST_CASE("one wall subtracts its attenuation") {
    const auto plan = two_rooms();
    const double r = rssi_at(placement_at({9, 5}), {11, 5}, plan, 0.0, 1);
    CHECK(std::abs(r - -80.02) <= 0.01);
  }

  TEST_CASE("distance below the clamp behaves like the clamp") {
    const auto p = placement_at({0, 0});
    CHECK(rssi_at(p, {0, 0}, {}, 0.0, 1) == rssi_at(p, {0.1, 0}, {}, 0.0, 1));
    CHECK(rssi_at(p, {0.05, 0}, {}, 0.0, 1) == doctest::Approx(-59.0 + 20.0));
  }

  TEST_CASE("strictly decreasing in distance, walls never help") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 30.0);
    const auto plan = two_rooms(20.0);
    for (int i = 0; i < 5000; ++i) {
      double d1 = u(rng), d2 = u(rng);
      if (d1 == d2) continue;
      if (d1 > d2) std::swap(d1, d2);
      const auto p = placement_at({0, 0});
      CHECK(rssi_at(p, {d1, 0}, {}, 0.0, 1) > rssi_at(p, {d2, 0}, {}, 0.0, 1));
      const Point a{u(rng) * 0.6, u(rng) / 3.0}, b{u(rng) * 0.6, u(rng) / 3.0};
      CHECK(rssi_at(placement_at(a), b, plan, 0.0, 1) <= rssi_at(placement_at(a), b, {}, 0.0, 1));
    }
  }

  TEST_CASE("shadowing is deterministic per seed") {
    const auto p = placement_at({0, 0});
    CHECK(rssi_at(p, {3, 4}, {}, 4.0, 99) == rssi_at(p, {3, 4}, {}, 4.0, 99));
    CHECK(rssi_at(p, {3, 4}, {}, 4.0, 99) != rssi_at(p, {3, 4}, {}, 4.0, 100));
  }

  TEST_CASE("shadowing has the requested spread") {
    const auto p = placement_at({0, 0});
    const double mean = rssi_at(p, {5, 0}, {}, 0.0, 0);
    double sum = 0, sq = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double v = rssi_at(p, {5, 0}, {}, 4.0, static_cast<std::uint64_t>(i)) - mean;
      sum += v;
      sq += v * v;
    }
    CHECK(std::abs(sum / n) < 0.1);
    CHECK(std::sqrt(sq / n) == doctest::Approx(4.0).epsilon(0.03));
  }

  TEST_CASE("placement checks") {
    CHECK_THROWS_AS(placement_at({0, 0}, -30.0).validate(), SchemaError);
    CHECK_THROWS_AS(placement_at({NAN, 0}).validate(), SchemaError);
    const auto plan = two_rooms();
    std::vector<BeaconPlacement> outside = {placement_at({25, 5})};
    CHECK_THROWS_AS(plan.validate(outside), SchemaError);
    std::vector<BeaconPlacement> inside = {placement_at({5, 5})};
    CHECK_NOTHROW(plan.validate(inside));
  }
}

TEST_SUITE("nearest beacon") {
  TEST_CASE("empty list has no nearest") { CHECK_FALSE(nearest_beacon({}).has_value()); }

  TEST_CASE("strongest signal wins") {
    const std::vector<core::BeaconReading> r = {reading("U1", -70), reading("U2", -60)};
    CHECK(nearest_beacon(r)->uuid == "U2");
  }

  TEST_CASE("ties go to the smallest uuid") {
    const std::vector<core::BeaconReading> r = {reading("U2", -60), reading("U1", -60)};
    CHECK(nearest_beacon(r)->uuid == "U1");
  }

  TEST_CASE("result does not depend on input order") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<core::BeaconReading> r;
      const int n = 1 + static_cast<int>(rng() % 8);
      for (int i = 0; i < n; ++i) {
        r.push_back(reading("U" + std::to_string(rng() % 5), -50 - static_cast<int>(rng() % 6)));
      }
      auto oracle = *std::max_element(r.begin(), r.end(), [](const auto& a, const auto& b) {
        return a.rssi != b.rssi ? a.rssi < b.rssi : a.uuid > b.uuid;
      });
      for (int k = 0; k < 5; ++k) {
        std::shuffle(r.begin(), r.end(), rng);
        const auto got = nearest_beacon(r);
        CHECK(got->uuid == oracle.uuid);
        CHECK(got->rssi == oracle.rssi);
      }
    }
  }
}

TEST_SUITE("scan") {
  TEST_CASE("same-room beacon two metres away is detected") {
    const auto plan = two_rooms();
    const std::vector<BeaconPlacement> p = {placement_at({5, 5})};
    const auto found = scan_beacons(plan, p, {7, 5}, {}, 42);
    REQUIRE(found.size() == 1);
    CHECK(found[0].rssi == -65);
    CHECK(found[0].observed_at == 42);
  }

  TEST_CASE("beacon behind two strong walls is below the floor") {
    FloorPlan plan;
    plan.rooms = {{"r1", {0, 0}, {4, 4}}, {"r2", {4, 0}, {8, 4}}, {"r3", {8, 0}, {12, 4}}};
    plan.walls = {{{4, 0}, {4, 4}, 20.0}, {{8, 0}, {8, 4}, 20.0}};
    const std::vector<BeaconPlacement> p = {placement_at({1, 2})};
    const double r = rssi_at(p[0], {9, 2}, plan, 0.0, 0);
    CHECK(r == doctest::Approx(-59.0 - 20.0 * std::log10(8.0) - 40.0));
    CHECK(r < -95.0);
    CHECK(scan_beacons(plan, p, {9, 2}, {}, 0).empty());
  }

  TEST_CASE("no placements, no readings") { CHECK(scan_beacons({}, {}, {0, 0}, {}, 0).empty()); }

  TEST_CASE("detection floor outside its range is rejected") {
    ScanParams params;
    params.detect_floor_dbm = -120;
    CHECK_THROWS_AS(scan_beacons({}, {}, {0, 0}, params, 0), Error);
  }

  TEST_CASE("noise-free classroom grid always picks the occupant's room") {
    for (double wall : {15.0, 20.0}) {
      for (double size : {3.0, 6.0, 8.0}) {
        const auto layout = make_classroom_grid(4, 2, size, size, wall);
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 2000; ++i) {
          const std::size_t room = rng() % layout.plan.rooms.size();
          const auto& r = layout.plan.rooms[room];
          // Keep off the walls themselves.
          const Point pos{r.min.x + 0.05 * size + 0.9 * size * u(rng),
                          r.min.y + 0.05 * size + 0.9 * size * u(rng)};
          const auto found = scan_beacons(layout.plan, layout.placements, pos, {}, 0);
          const auto nearest = nearest_beacon(found);
          REQUIRE(nearest.has_value());
          CHECK(nearest->uuid == layout.placements[room].uuid);
        }
      }
    }
  }
}

TEST_SUITE("snapshot") {
  TEST_CASE("readings one second old are all kept") {
    SourcesLatest latest{{testing::beacon("iB-1", -60, 9000)}, testing::gps(9000),
                         testing::env(9000), testing::weather(9000)};
    const auto s = assemble_snapshot(latest, 10000);
    CHECK(s.beacons.size() == 1);
    CHECK(s.gps.has_value());
    CHECK(s.env.has_value());
    CHECK(s.weather.has_value());
    CHECK(s.assembled_at == 10000);
  }

  TEST_CASE("window boundary is inclusive") {
    SourcesLatest latest;
    latest.env = testing::env(0);
    CHECK_FALSE(assemble_snapshot(latest, 31000, 30000).env.has_value());
    CHECK(assemble_snapshot(latest, 30000, 30000).env.has_value());
    CHECK_FALSE(assemble_snapshot(latest, 30001, 30000).env.has_value());
  }

  TEST_CASE("future readings are not kept") {
    SourcesLatest latest;
    latest.gps = testing::gps(5001);
    CHECK_FALSE(assemble_snapshot(latest, 5000).gps.has_value());
  }

  TEST_CASE("nothing older than the window and nothing newer than now") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 3000; ++i) {
      const TimestampMs now = 100000;
      const TimestampMs window = 1 + static_cast<TimestampMs>(rng() % 60000);
      auto at = [&] { return now - 70000 + static_cast<TimestampMs>(rng() % 80000); };
      SourcesLatest latest{{testing::beacon("a", -60, at()), testing::beacon("b", -61, at())},
                           testing::gps(at()), testing::env(at()), testing::weather(at())};
      const auto s = assemble_snapshot(latest, now, window);
      auto ok = [&](TimestampMs t) { return now - t >= 0 && now - t <= window; };
      for (const auto& b : s.beacons) CHECK(ok(b.observed_at));
      CHECK(s.gps.has_value() == ok(latest.gps->observed_at));
      CHECK(s.env.has_value() == ok(latest.env->observed_at));
      CHECK(s.weather.has_value() == ok(latest.weather->observed_at));
      const auto again = assemble_snapshot(latest, now, window);
      CHECK(again.beacons == s.beacons);
      CHECK(again.gps == s.gps);
    }
  }

  TEST_CASE("non-positive window is rejected") {
    CHECK_THROWS_AS(assemble_snapshot({}, 0, 0), Error);
  }

  TEST_CASE("cells hold the latest value and clear per source") {
    SourceCells cells;
    cells.gps.publish(testing::gps(1));
    cells.gps.publish(testing::gps(2));
    cells.env.publish(testing::env(2));
    CHECK(cells.read().gps->observed_at == 2);
    cells.clear(core::Source::kGps);
    const auto latest = cells.read();
    CHECK_FALSE(latest.gps.has_value());
    CHECK(latest.env.has_value());
  }

  TEST_CASE("concurrent producers and readers") {
    SourceCells cells;
    std::atomic<bool> stop{false};
    std::thread producer([&] {
      for (TimestampMs t = 1; t < 20000; ++t) {
        cells.gps.publish(testing::gps(t));
        cells.env.publish(testing::env(t));
      }
      stop = true;
    });
    TimestampMs last = 0;
    while (!stop) {
      const auto latest = cells.read();
      if (latest.gps) {
        CHECK(latest.gps->observed_at >= last);
        last = latest.gps->observed_at;
      }
    }
    producer.join();
    CHECK(cells.read().gps->observed_at == 19999);
  }
}

TEST_SUITE("simulated sources") {
  TEST_CASE("gps and env frames are pure in (seed, t) and in range") {
    const GpsSimulator gps{34.79, 132.78, 0.0001, 9};
    const EnvSimulator env{9};
    for (TimestampMs t = 0; t < 100000; t += 997) {
      CHECK(gps.sample(t) == gps.sample(t));
      CHECK(env.sample(t) == env.sample(t));
      CHECK_NOTHROW(gps.sample(t).validate());
      CHECK_NOTHROW(env.sample(t).validate());
      CHECK(gps.sample(t).observed_at == t);
    }
  }

  TEST_CASE("simulated weather payload parses to 15 fields") {
    const WeatherPayloadSimulator sim{4};
    const auto payload = nlohmann::json::parse(sim.payload_json(34.79, 132.78, 1700000000000));
    const auto w = parse_weather_payload(payload, 5, core::WeatherSourceMode::kSimulated);
    CHECK(w.present_count() == 15);
    CHECK_NOTHROW(w.validate());
  }
}

TEST_SUITE("weather") {
  TEST_CASE("fixture payload round-trips into 15 populated fields") {
    testing::TempDir dir;
    core::write_text_file(dir / (fixture_key(34.79, 132.78) + ".json"), sim::weather_fixture_payload());
    WeatherClient client(config_for(WeatherMode::kFixture, dir.path()));
    const auto w = client.fetch_weather(34.7912, 132.7788, 1000);
    CHECK(w.present_count() == 15);
    CHECK(w.mode == core::WeatherSourceMode::kFixture);
    CHECK(w.observed_at == 1000);
    const auto r = core::flatten_record("e", "s", {0, "x", "y"}, 1000, {{}, {}, {}, w, 1000});
    CHECK(r.value_count(core::Source::kWeather) == 15);
  }

  TEST_CASE("fixture key rounds to two decimals") {
    CHECK(fixture_key(34.7912, 132.7788) == "34.79_132.78");
    CHECK(fixture_key(-1.005, 0.0) == fixture_key(-1.0, 0.0));
  }

  TEST_CASE("no fixture means the source is unavailable") {
    testing::TempDir dir;
    WeatherClient client(config_for(WeatherMode::kFixture, dir.path()));
    try {
      (void)client.fetch_weather(10.0, 10.0, 0);
      FAIL("expected unavailable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnavailable);
    }
  }

  TEST_CASE("off mode is unavailable") {
    WeatherClient client(config_for(WeatherMode::kOff));
    CHECK_THROWS_AS((void)client.fetch_weather(34.79, 132.78, 0), Error);
  }

  TEST_CASE("payload without wind direction leaves only A14 empty") {
    auto payload = nlohmann::json::parse(sim::weather_fixture_payload());
    payload["wind"].erase("deg");
    const auto w = parse_weather_payload(payload, 0, core::WeatherSourceMode::kFixture);
    CHECK(w.present_count() == 14);
    const auto r = core::flatten_record("e", "s", {0, "x", "y"}, 0, {{}, {}, {}, w, 0});
    CHECK(r.slot("A14").error_kind() == core::SlotError::kFieldMissing);
    CHECK(r.value_count(core::Source::kWeather) == 14);
  }

  TEST_CASE("malformed or error payloads are unavailable") {
    using nlohmann::json;
    CHECK_THROWS_AS(parse_weather_payload(json::array(), 0, core::WeatherSourceMode::kLive), Error);
    CHECK_THROWS_AS(parse_weather_payload(json{{"cod", 401}, {"message", "bad key"}}, 0,
                                          core::WeatherSourceMode::kLive),
                    Error);
    CHECK_THROWS_AS(parse_weather_payload(json::object(), 0, core::WeatherSourceMode::kLive), Error);
  }

  TEST_CASE("payload with wrong field types keeps the rest") {
    auto payload = nlohmann::json::parse(sim::weather_fixture_payload());
    payload["main"]["humidity"] = "wet";
    payload["name"] = 12;
    const auto w = parse_weather_payload(payload, 0, core::WeatherSourceMode::kLive);
    CHECK(w.present_count() == 13);
    CHECK_FALSE(w.humidity.has_value());
  }

  TEST_CASE("live mode queries the endpoint, caches for the ttl, and fails cleanly") {
    httplib::Server server;
    std::atomic<int> calls{0};
    std::atomic<int> status{200};
    std::string last_query;
    server.Get("/data/2.5/weather", [&](const httplib::Request& req, httplib::Response& res) {
      ++calls;
      last_query = req.get_param_value("appid");
      res.status = status.load();
      res.set_content(status == 200 ? sim::weather_fixture_payload() : "{\"cod\":500}",
                      "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    WeatherClientConfig cfg;
    cfg.mode = WeatherMode::kLive;
    cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
    cfg.api_key = "test-key";
    WeatherClient client(cfg);
    const auto w = client.fetch_weather(34.79, 132.78, 1000);
    CHECK(w.mode == core::WeatherSourceMode::kLive);
    CHECK(w.present_count() == 15);
    CHECK(last_query == "test-key");
    CHECK(calls == 1);

    // Served from cache, keeping the original observation time.
    CHECK(client.fetch_weather(34.79, 132.78, 60999).observed_at == 1000);
    CHECK(calls == 1);

    status = 500;
    CHECK_THROWS_AS((void)client.fetch_weather(34.79, 132.78, 61000), Error);
    CHECK(calls == 2);
    server.stop();
    t.join();

    // Nothing listening any more.
    CHECK_THROWS_AS((void)client.fetch_weather(34.79, 132.78, 200000), Error);
  }

  TEST_CASE("weather mode names") {
    CHECK(parse_weather_mode("live") == WeatherMode::kLive);
    CHECK(parse_weather_mode("fixture") == WeatherMode::kFixture);
    CHECK(parse_weather_mode("off") == WeatherMode::kOff);
    CHECK_FALSE(parse_weather_mode("sunny").has_value());
  }
}
