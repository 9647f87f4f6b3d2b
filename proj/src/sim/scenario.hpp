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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/codec.hpp"

#include "core/clock.hpp"
#include "core/model.hpp"
#include "core/registry.hpp"
#include "sensors/propagation.hpp"
#include "sensors/snapshot.hpp"

namespace exl::sim {

// Outage target: one of the four sensor sources or the store link.
enum class FaultTarget { kBeacon, kGps, kEnv, kWeather, kStore };

std::string_view fault_target_name(FaultTarget target) noexcept;

struct FaultWindow {
  FaultTarget target = FaultTarget::kStore;
  TimestampMs from_ms = 0;  // offsets from scenario start, [from, to)
  TimestampMs to_ms = 0;

  bool covers(TimestampMs offset) const noexcept { return offset >= from_ms && offset < to_ms; }
};

struct Waypoint {
  TimestampMs at_ms = 0;
  sensors::Point position;
};

struct ClickSpec {
  TimestampMs at_ms = 0;
  std::string behavior_name;
  std::optional<std::string> category_name;
};

enum class SimWeather { kSimulated, kFixture, kLive, kOff };

std::string_view sim_weather_name(SimWeather mode) noexcept;
SimWeather parse_sim_weather(std::string_view name);

struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  std::string device_id = "sim-device";
  TimestampMs start_ms = 1'700'000'000'000;
  TimestampMs freshness_window_ms = sensors::kDefaultFreshnessWindowMs;
  std::optional<std::string> location_label;

  sensors::FloorPlan plan;
  std::vector<sensors::BeaconPlacement> beacons;
  double noise_sigma_db = 0.0;
  double detect_floor_dbm = -95.0;
  std::vector<Waypoint> device_path;

  double latitude = 34.79;
  double longitude = 132.78;
  SimWeather weather = SimWeather::kSimulated;
  std::filesystem::path weather_fixture_dir;

  core::BehaviorRegistry registry = core::default_registry();
  std::vector<ClickSpec> clicks;
  std::vector<FaultWindow> faults;

  bool outage(FaultTarget target, TimestampMs offset) const noexcept;
  sensors::Point device_at(TimestampMs offset) const;
  // Throws SchemaError listing every problem: ordering, unresolved behaviors,
  // placements outside rooms.
  void validate() const;
};

// Parses the scenario document. Relative fixture paths resolve against
// base_dir. Throws kParse / SchemaError.
ScenarioConfig parse_scenario(const core::Json& doc, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace exl::sim
