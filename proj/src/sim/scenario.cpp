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

#include "sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "core/codec.hpp"
#include "core/error.hpp"

namespace exl::sim {

using json = core::Json;

std::string_view fault_target_name(FaultTarget target) noexcept {
  switch (target) {
    case FaultTarget::kBeacon: return "beacon";
    case FaultTarget::kGps: return "gps";
    case FaultTarget::kEnv: return "env";
    case FaultTarget::kWeather: return "weather";
    case FaultTarget::kStore: return "store";
  }
  return "?";
}

std::string_view sim_weather_name(SimWeather mode) noexcept {
  switch (mode) {
    case SimWeather::kSimulated: return "simulated";
    case SimWeather::kFixture: return "fixture";
    case SimWeather::kLive: return "live";
    case SimWeather::kOff: return "off";
  }
  return "?";
}

SimWeather parse_sim_weather(std::string_view name) {
  if (name == "simulated") return SimWeather::kSimulated;
  if (name == "fixture") return SimWeather::kFixture;
  if (name == "live") return SimWeather::kLive;
  if (name == "off") return SimWeather::kOff;
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("unknown weather mode '{}' (simulated|fixture|live|off)", name));
}

bool ScenarioConfig::outage(FaultTarget target, TimestampMs offset) const noexcept {
  return std::any_of(faults.begin(), faults.end(), [&](const FaultWindow& f) {
    return f.target == target && f.covers(offset);
  });
}

sensors::Point ScenarioConfig::device_at(TimestampMs offset) const {
  if (device_path.empty()) {
    if (!beacons.empty()) return beacons.front().position;
    throw Error(ErrorCode::kInvalidArgument, "scenario has neither a device path nor beacons");
  }
  if (offset <= device_path.front().at_ms) return device_path.front().position;
  for (std::size_t i = 1; i < device_path.size(); ++i) {
    const auto& a = device_path[i - 1];
    const auto& b = device_path[i];
    if (offset <= b.at_ms) {
      if (b.at_ms == a.at_ms) return b.position;
      const double f = static_cast<double>(offset - a.at_ms) / static_cast<double>(b.at_ms - a.at_ms);
      return {a.position.x + f * (b.position.x - a.position.x),
              a.position.y + f * (b.position.y - a.position.y)};
    }
  }
  return device_path.back().position;
}

void ScenarioConfig::validate() const {
  std::vector<std::string> diags;
  if (freshness_window_ms <= 0) diags.push_back("freshness_window_ms: must be positive");
  if (noise_sigma_db < 0) diags.push_back("noise_sigma_db: must be >= 0");
  if (detect_floor_dbm < -110 || detect_floor_dbm > -60) {
    diags.push_back("detect_floor_dbm: must lie in [-110, -60]");
  }
  if (device_id.empty()) diags.push_back("device_id: empty");
  for (std::size_t i = 1; i < device_path.size(); ++i) {
    if (device_path[i].at_ms < device_path[i - 1].at_ms) {
      diags.push_back(fmt::format("device_path[{}]: time goes backwards", i));
    }
  }
  for (std::size_t i = 0; i < clicks.size(); ++i) {
    if (clicks[i].at_ms < 0) diags.push_back(fmt::format("clicks[{}]: negative time", i));
    if (i > 0 && clicks[i].at_ms < clicks[i - 1].at_ms) {
      diags.push_back(fmt::format("clicks[{}]: time goes backwards", i));
    }
    const auto& c = clicks[i];
    bool resolves = false;
    try {
      resolves = c.category_name ? registry.find(c.behavior_name, *c.category_name).has_value()
                                 : registry.find_by_name(c.behavior_name).has_value();
    } catch (const Error&) {
      resolves = false;
    }
    if (!resolves) {
      diags.push_back(fmt::format("clicks[{}]: unresolved behavior '{}'", i, c.behavior_name));
    }
  }
  for (std::size_t i = 0; i < faults.size(); ++i) {
    if (faults[i].to_ms <= faults[i].from_ms) {
      diags.push_back(fmt::format("faults[{}]: empty window", i));
    }
  }
  if (weather == SimWeather::kFixture && weather_fixture_dir.empty()) {
    diags.push_back("weather.fixture_dir: required in fixture mode");
  }
  try {
    plan.validate(beacons);
  } catch (const SchemaError& e) {
    for (const auto& d : e.diagnostics()) diags.push_back("beacons: " + d);
  }
  if (!diags.empty()) throw SchemaError(std::move(diags));
}

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw SchemaError({path + ": " + what});
}

double number_at(const json& j, const char* key, const std::string& path, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) bad(path + "." + key, "must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) bad(path + "." + key, "must be finite");
  return v;
}

TimestampMs int_at(const json& j, const char* key, const std::string& path,
                   std::optional<TimestampMs> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    bad(path + "." + key, "required");
  }
  if (!it->is_number_integer()) bad(path + "." + key, "must be an integer");
  return it->get<TimestampMs>();
}

std::string string_at(const json& j, const char* key, const std::string& path,
                      std::optional<std::string> fallback = std::nullopt) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    bad(path + "." + key, "required");
  }
  if (!it->is_string()) bad(path + "." + key, "must be a string");
  return it->get<std::string>();
}

sensors::Point point_at(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "required");
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
    bad(path + "." + key, "must be [x, y]");
  }
  return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

const json& array_at(const json& j, const char* key, const std::string& path) {
  static const json kEmpty = json::array();
  auto it = j.find(key);
  if (it == j.end()) return kEmpty;
  if (!it->is_array()) bad(path + "." + key, "must be an array");
  return *it;
}

FaultTarget parse_target(const std::string& s, const std::string& path) {
  std::string lower = s;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "beacon" || lower == "ibeacon") return FaultTarget::kBeacon;
  if (lower == "gps") return FaultTarget::kGps;
  if (lower == "env" || lower == "alps") return FaultTarget::kEnv;
  if (lower == "weather" || lower == "weather api") return FaultTarget::kWeather;
  if (lower == "store") return FaultTarget::kStore;
  bad(path, "unknown fault target '" + s + "'");
}

void parse_floor(const json& doc, ScenarioConfig& cfg) {
  auto it = doc.find("floor_plan");
  if (it == doc.end()) return;
  const json& fp = *it;
  if (!fp.is_object()) bad("floor_plan", "must be an object");
  if (auto g = fp.find("grid"); g != fp.end()) {
    const std::string path = "floor_plan.grid";
    const auto cols = int_at(*g, "columns", path);
    const auto rows = int_at(*g, "rows", path);
    if (cols < 1 || rows < 1 || cols * rows > 255) bad(path, "columns x rows must be 1..255");
    auto layout = sensors::make_classroom_grid(
        static_cast<int>(cols), static_cast<int>(rows), number_at(*g, "room_width_m", path, 8.0),
        number_at(*g, "room_depth_m", path, 8.0), number_at(*g, "wall_db", path, 15.0),
        number_at(*g, "tx_power_dbm", path, -59.0));
    cfg.plan = std::move(layout.plan);
    cfg.beacons = std::move(layout.placements);
    return;
  }
  const auto& rooms = array_at(fp, "rooms", "floor_plan");
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    const std::string path = fmt::format("floor_plan.rooms[{}]", i);
    cfg.plan.rooms.push_back({string_at(rooms[i], "room_id", path), point_at(rooms[i], "min", path),
                              point_at(rooms[i], "max", path)});
  }
  const auto& walls = array_at(fp, "walls", "floor_plan");
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const std::string path = fmt::format("floor_plan.walls[{}]", i);
    sensors::Wall w{point_at(walls[i], "from", path), point_at(walls[i], "to", path),
                    number_at(walls[i], "attenuation_db", path, 0.0)};
    if (w.attenuation_db < 0) bad(path + ".attenuation_db", "must be >= 0");
    cfg.plan.walls.push_back(w);
  }
}

}  // namespace

ScenarioConfig parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) bad("scenario", "must be an object");
  ScenarioConfig cfg;
  cfg.name = string_at(doc, "name", "scenario", cfg.name);
  cfg.seed = static_cast<std::uint64_t>(int_at(doc, "seed", "scenario", 1));
  cfg.device_id = string_at(doc, "device_id", "scenario", cfg.device_id);
  cfg.start_ms = int_at(doc, "start_ms", "scenario", cfg.start_ms);
  cfg.freshness_window_ms = int_at(doc, "freshness_window_ms", "scenario", cfg.freshness_window_ms);
  if (doc.contains("location_label")) {
    cfg.location_label = string_at(doc, "location_label", "scenario");
  }
  cfg.noise_sigma_db = number_at(doc, "noise_sigma_db", "scenario", 0.0);
  cfg.detect_floor_dbm = number_at(doc, "detect_floor_dbm", "scenario", -95.0);

  parse_floor(doc, cfg);
  if (doc.contains("beacons")) {
    cfg.beacons.clear();
    const auto& beacons = array_at(doc, "beacons", "scenario");
    for (std::size_t i = 0; i < beacons.size(); ++i) {
      const std::string path = fmt::format("beacons[{}]", i);
      cfg.beacons.push_back({string_at(beacons[i], "uuid", path),
                             string_at(beacons[i], "beacon_name", path),
                             point_at(beacons[i], "position", path),
                             number_at(beacons[i], "tx_power_at_1m", path, -59.0)});
    }
  }

  const auto& path_points = array_at(doc, "device_path", "scenario");
  for (std::size_t i = 0; i < path_points.size(); ++i) {
    const std::string path = fmt::format("device_path[{}]", i);
    cfg.device_path.push_back(
        {int_at(path_points[i], "at_ms", path, 0), point_at(path_points[i], "position", path)});
  }

  if (auto g = doc.find("gps"); g != doc.end()) {
    cfg.latitude = number_at(*g, "latitude", "gps", cfg.latitude);
    cfg.longitude = number_at(*g, "longitude", "gps", cfg.longitude);
  }
  if (auto w = doc.find("weather"); w != doc.end()) {
    cfg.weather = parse_sim_weather(string_at(*w, "mode", "weather", "simulated"));
    if (w->contains("fixture_dir")) {
      std::filesystem::path dir = string_at(*w, "fixture_dir", "weather");
      cfg.weather_fixture_dir = dir.is_relative() && !base_dir.empty() ? base_dir / dir : dir;
    }
  }

  if (auto r = doc.find("registry"); r != doc.end()) {
    cfg.registry = core::BehaviorRegistry::from_definitions(core::decode_definitions(*r));
  }

  const auto& clicks = array_at(doc, "clicks", "scenario");
  for (std::size_t i = 0; i < clicks.size(); ++i) {
    const std::string path = fmt::format("clicks[{}]", i);
    ClickSpec c{int_at(clicks[i], "at_ms", path), string_at(clicks[i], "behavior_name", path),
                std::nullopt};
    if (clicks[i].contains("category_name")) {
      c.category_name = string_at(clicks[i], "category_name", path);
    }
    cfg.clicks.push_back(std::move(c));
  }
  if (auto rate = doc.find("click_rate"); rate != doc.end()) {
    if (!cfg.clicks.empty()) bad("click_rate", "cannot be combined with clicks");
    const auto count = int_at(*rate, "count", "click_rate");
    const double mean = number_at(*rate, "mean_interval_ms", "click_rate", 10'000.0);
    if (count < 0 || count > 100'000) bad("click_rate.count", "must be 0..100000");
    if (!(mean >= 1)) bad("click_rate.mean_interval_ms", "must be >= 1");
    std::vector<core::BehaviorDefinition> choices;
    for (const auto& name : array_at(*rate, "behaviors", "click_rate")) {
      if (!name.is_string()) bad("click_rate.behaviors", "must hold strings");
      auto def = cfg.registry.find_by_name(name.get<std::string>());
      if (!def) bad("click_rate.behaviors", "unresolved behavior '" + name.get<std::string>() + "'");
      choices.push_back(*def);
    }
    if (choices.empty()) choices = cfg.registry.definitions();
    if (choices.empty() && count > 0) bad("click_rate", "registry is empty");
    std::mt19937_64 rng(sensors::mix_seed(cfg.seed, 0xC11C));
    std::exponential_distribution<double> gap(1.0 / mean);
    TimestampMs t = 0;
    for (TimestampMs i = 0; i < count; ++i) {
      t += std::max<TimestampMs>(1, std::llround(gap(rng)));
      const auto& def = choices[static_cast<std::size_t>(rng() % choices.size())];
      cfg.clicks.push_back({t, def.behavior_name, def.category_name});
    }
  }

  const auto& faults = array_at(doc, "faults", "scenario");
  for (std::size_t i = 0; i < faults.size(); ++i) {
    const std::string path = fmt::format("faults[{}]", i);
    cfg.faults.push_back({parse_target(string_at(faults[i], "source", path), path + ".source"),
                          int_at(faults[i], "from_ms", path), int_at(faults[i], "to_ms", path)});
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  const std::string text = core::read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  auto cfg = parse_scenario(doc, path.parent_path());
  cfg.validate();
  return cfg;
}

}  // namespace exl::sim
