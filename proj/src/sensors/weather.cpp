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

#include "sensors/weather.hpp"

#include <cstdlib>

#include <fmt/format.h>
#include <httplib.h>

#include "core/codec.hpp"
#include "core/error.hpp"

namespace exl::sensors {

using nlohmann::json;

std::optional<WeatherMode> parse_weather_mode(std::string_view text) noexcept {
  if (text == "live") return WeatherMode::kLive;
  if (text == "fixture") return WeatherMode::kFixture;
  if (text == "off") return WeatherMode::kOff;
  return std::nullopt;
}

std::string_view weather_mode_name(WeatherMode mode) noexcept {
  switch (mode) {
    case WeatherMode::kLive: return "live";
    case WeatherMode::kFixture: return "fixture";
    case WeatherMode::kOff: return "off";
  }
  return "?";
}

std::string fixture_key(double latitude, double longitude) {
  return fmt::format("{:.2f}_{:.2f}", latitude, longitude);
}

namespace {

const json* at_path(const json& root, std::initializer_list<std::string_view> path) {
  const json* node = &root;
  for (auto key : path) {
    if (!node->is_object()) return nullptr;
    auto it = node->find(key);
    if (it == node->end()) return nullptr;
    node = &*it;
  }
  return node;
}

const json* first_weather(const json& root) {
  auto it = root.find("weather");
  if (it == root.end() || !it->is_array() || it->empty() || !(*it)[0].is_object()) return nullptr;
  return &(*it)[0];
}

std::optional<std::string> text_at(const json* node) {
  if (node && node->is_string()) return node->get<std::string>();
  return std::nullopt;
}

std::optional<double> number_at(const json* node) {
  if (node && node->is_number()) return node->get<double>();
  return std::nullopt;
}

std::optional<std::int64_t> integer_at(const json* node) {
  if (node && node->is_number()) return static_cast<std::int64_t>(node->get<double>());
  return std::nullopt;
}

}  // namespace

core::WeatherSnapshot parse_weather_payload(const json& payload, TimestampMs observed_at,
                                            core::WeatherSourceMode mode) {
  if (!payload.is_object()) {
    throw Error(ErrorCode::kUnavailable, "weather payload is not an object");
  }
  if (auto cod = payload.find("cod"); cod != payload.end()) {
    const bool ok = (cod->is_number() && cod->get<double>() == 200) ||
                    (cod->is_string() && cod->get<std::string>() == "200");
    if (!ok) {
      throw Error(ErrorCode::kUnavailable,
                  "weather service returned an error payload: " + payload.dump());
    }
  }
  const json* w0 = first_weather(payload);
  core::WeatherSnapshot s;
  s.country_name = text_at(at_path(payload, {"sys", "country"}));
  s.location_name = text_at(at_path(payload, {"name"}));
  s.weather = text_at(w0 ? at_path(*w0, {"main"}) : nullptr);
  s.sunset_time = integer_at(at_path(payload, {"sys", "sunset"}));
  s.sunrise_time = integer_at(at_path(payload, {"sys", "sunrise"}));
  s.current_time = integer_at(at_path(payload, {"dt"}));
  s.temp_min = number_at(at_path(payload, {"main", "temp_min"}));
  s.temp_max = number_at(at_path(payload, {"main", "temp_max"}));
  s.pressure = number_at(at_path(payload, {"main", "pressure"}));
  s.temp_main = number_at(at_path(payload, {"main", "temp"}));
  s.humidity = number_at(at_path(payload, {"main", "humidity"}));
  s.weather_description = text_at(w0 ? at_path(*w0, {"description"}) : nullptr);
  s.cloudiness = number_at(at_path(payload, {"clouds", "all"}));
  s.wind_direction = number_at(at_path(payload, {"wind", "deg"}));
  s.wind_speed = number_at(at_path(payload, {"wind", "speed"}));
  s.observed_at = observed_at;
  s.mode = mode;
  if (s.present_count() == 0) {
    throw Error(ErrorCode::kUnavailable, "weather payload carries none of the 15 parameters");
  }
  return s;
}

WeatherClient::WeatherClient(WeatherClientConfig config) : config_(std::move(config)) {
  if (config_.api_key.empty()) {
    if (const char* key = std::getenv("OPENWEATHERMAP_API_KEY")) config_.api_key = key;
  }
}

json WeatherClient::load_fixture(const std::string& key) const {
  const auto path = config_.fixture_dir / (key + ".json");
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kUnavailable, "no weather fixture for " + key + " in " +
                                             config_.fixture_dir.string());
  }
  try {
    return json::parse(core::read_text_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kUnavailable, "malformed weather fixture " + path.string() + ": " +
                                             e.what());
  }
}

json WeatherClient::query_live(double latitude, double longitude) const {
  httplib::Client client(config_.base_url);
  client.set_connection_timeout(config_.timeout_s, 0);
  client.set_read_timeout(config_.timeout_s, 0);
  const std::string path =
      fmt::format("/data/2.5/weather?lat={:.4f}&lon={:.4f}&units=metric&appid={}", latitude,
                  longitude, config_.api_key);
  auto res = client.Get(path);
  if (!res) {
    throw Error(ErrorCode::kUnavailable,
                "weather request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kUnavailable,
                fmt::format("weather service answered HTTP {}", res->status));
  }
  try {
    return json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kUnavailable, std::string("malformed weather payload: ") + e.what());
  }
}

core::WeatherSnapshot WeatherClient::fetch_weather(double latitude, double longitude,
                                                   TimestampMs now) {
  core::GpsFix{latitude, longitude, now}.validate();
  const std::string key = fixture_key(latitude, longitude);
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      const TimestampMs age = now - it->second.observed_at;
      if (age >= 0 && age < config_.cache_ttl_ms) return it->second;
    }
  }

  core::WeatherSnapshot snapshot;
  switch (config_.mode) {
    case WeatherMode::kOff:
      throw Error(ErrorCode::kUnavailable, "weather source is off");
    case WeatherMode::kFixture:
      snapshot = parse_weather_payload(load_fixture(key), now, core::WeatherSourceMode::kFixture);
      break;
    case WeatherMode::kLive:
      snapshot = parse_weather_payload(query_live(latitude, longitude), now,
                                       core::WeatherSourceMode::kLive);
      break;
  }
  std::lock_guard lock(mu_);
  cache_[key] = snapshot;
  return snapshot;
}

}  // namespace exl::sensors
