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

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "core/clock.hpp"
#include "core/model.hpp"

namespace exl::sensors {

enum class WeatherMode { kLive, kFixture, kOff };

std::optional<WeatherMode> parse_weather_mode(std::string_view text) noexcept;
std::string_view weather_mode_name(WeatherMode mode) noexcept;

struct WeatherClientConfig {
  WeatherMode mode = WeatherMode::kFixture;
  std::filesystem::path fixture_dir;
  std::string base_url = "https://api.openweathermap.org";
  std::string api_key;  // empty: read OPENWEATHERMAP_API_KEY
  TimestampMs cache_ttl_ms = 60'000;
  int timeout_s = 5;
};

// Fixture file stem for a coordinate: both values rounded to 2 decimals.
std::string fixture_key(double latitude, double longitude);

// Maps an OpenWeatherMap current-weather payload onto the 15 parameters.
// Fields that are absent or of the wrong type stay nullopt. Throws
// Error(kUnavailable) when the payload is not usable at all.
core::WeatherSnapshot parse_weather_payload(const nlohmann::json& payload, TimestampMs observed_at,
                                            core::WeatherSourceMode mode);

class WeatherClient {
 public:
  explicit WeatherClient(WeatherClientConfig config);

  // Serves a cached snapshot younger than cache_ttl_ms; the cached snapshot
  // keeps its original observed_at. Throws Error(kUnavailable).
  core::WeatherSnapshot fetch_weather(double latitude, double longitude, TimestampMs now);

  const WeatherClientConfig& config() const noexcept { return config_; }

 private:
  nlohmann::json load_fixture(const std::string& key) const;
  nlohmann::json query_live(double latitude, double longitude) const;

  WeatherClientConfig config_;
  std::mutex mu_;
  std::map<std::string, core::WeatherSnapshot> cache_;
};

}  // namespace exl::sensors
