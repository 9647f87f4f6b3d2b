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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "core/clock.hpp"

namespace exl::core {

struct BehaviorDefinition {
  std::int64_t category_code = 0;  // display rank, 0 = most common
  std::string behavior_name;
  std::string category_name;

  // Throws SchemaError listing every violated field.
  void validate() const;

  bool same_identity(const BehaviorDefinition& other) const {
    return behavior_name == other.behavior_name && category_name == other.category_name;
  }

  friend bool operator==(const BehaviorDefinition&, const BehaviorDefinition&) = default;
};

struct BeaconReading {
  std::string uuid;
  int rssi = 0;  // dBm
  std::string beacon_name;
  TimestampMs observed_at = 0;

  friend bool operator==(const BeaconReading&, const BeaconReading&) = default;
};

struct GpsFix {
  double latitude = 0.0;
  double longitude = 0.0;
  TimestampMs observed_at = 0;

  void validate() const;
  friend bool operator==(const GpsFix&, const GpsFix&) = default;
};

// Eleven channels of the environment sensor module, S1..S11. A channel the
// module failed to report is nullopt.
struct EnvFrame {
  std::optional<double> uv_range;         // S1, mW/cm2
  std::optional<double> geomag_range_g1;  // S2, g
  std::optional<double> geomag_range_g2;  // S3
  std::optional<double> geomag_range_g3;  // S4
  std::optional<double> geomag_res_ut1;   // S5, uT
  std::optional<double> geomag_res_ut2;   // S6
  std::optional<double> geomag_res_ut3;   // S7
  std::optional<double> ambient_light;    // S8, Lx
  std::optional<double> pressure;         // S9, hPa
  std::optional<double> temperature;      // S10, C
  std::optional<double> humidity;         // S11, %RH
  TimestampMs observed_at = 0;

  static constexpr std::size_t kChannelCount = 11;

  std::array<std::optional<double>, kChannelCount> channels() const;
  void validate() const;
  friend bool operator==(const EnvFrame&, const EnvFrame&) = default;
};

enum class WeatherSourceMode { kLive, kFixture, kSimulated };

// Fifteen current-weather parameters, A1..A15. Times are epoch seconds as
// delivered by the weather service.
struct WeatherSnapshot {
  std::optional<std::string> country_name;         // A1
  std::optional<std::string> location_name;        // A2
  std::optional<std::string> weather;              // A3
  std::optional<std::int64_t> sunset_time;         // A4
  std::optional<std::int64_t> sunrise_time;        // A5
  std::optional<std::int64_t> current_time;        // A6
  std::optional<double> temp_min;                  // A7
  std::optional<double> temp_max;                  // A8
  std::optional<double> pressure;                  // A9
  std::optional<double> temp_main;                 // A10
  std::optional<double> humidity;                  // A11
  std::optional<std::string> weather_description;  // A12
  std::optional<double> cloudiness;                // A13
  std::optional<double> wind_direction;            // A14
  std::optional<double> wind_speed;                // A15
  TimestampMs observed_at = 0;
  WeatherSourceMode mode = WeatherSourceMode::kLive;

  static constexpr std::size_t kParameterCount = 15;

  std::size_t present_count() const;
  void validate() const;
  friend bool operator==(const WeatherSnapshot&, const WeatherSnapshot&) = default;
};

// Latest readings from every source, joined at click time.
struct SensorSnapshot {
  std::vector<BeaconReading> beacons;
  std::optional<GpsFix> gps;
  std::optional<EnvFrame> env;
  std::optional<WeatherSnapshot> weather;
  TimestampMs assembled_at = 0;
};

// ---------------------------------------------------------------------------
// Record slots

enum class Source : std::uint8_t { kBeacon = 0, kGps = 1, kEnv = 2, kWeather = 3 };
inline constexpr std::array<Source, 4> kAllSources = {Source::kBeacon, Source::kGps, Source::kEnv,
                                                      Source::kWeather};

std::string_view source_name(Source source) noexcept;

struct SlotSpec {
  std::string_view code;
  Source source;
  std::string_view label;
};

inline constexpr std::size_t kSlotCount = 31;

inline constexpr std::array<SlotSpec, kSlotCount> kSlotSpecs = {{
    {"iB1", Source::kBeacon, "UUID"},
    {"iB2", Source::kBeacon, "RSSI (dBm)"},
    {"iB3", Source::kBeacon, "iBeacon name"},
    {"GPS1", Source::kGps, "Longitude"},
    {"GPS2", Source::kGps, "Latitude"},
    {"S1", Source::kEnv, "UV range (mW/cm2)"},
    {"S2", Source::kEnv, "6-axis range g1 (g)"},
    {"S3", Source::kEnv, "6-axis range g2 (g)"},
    {"S4", Source::kEnv, "6-axis range g3 (g)"},
    {"S5", Source::kEnv, "6-axis resolution uT1"},
    {"S6", Source::kEnv, "6-axis resolution uT2"},
    {"S7", Source::kEnv, "6-axis resolution uT3"},
    {"S8", Source::kEnv, "UV resolution (Lx)"},
    {"S9", Source::kEnv, "Pressure (hPa)"},
    {"S10", Source::kEnv, "Temperature (C)"},
    {"S11", Source::kEnv, "Humidity (%RH)"},
    {"A1", Source::kWeather, "Country name"},
    {"A2", Source::kWeather, "Location name"},
    {"A3", Source::kWeather, "Weather"},
    {"A4", Source::kWeather, "Sunset time"},
    {"A5", Source::kWeather, "Sunrise time"},
    {"A6", Source::kWeather, "Current time"},
    {"A7", Source::kWeather, "Minimum temperature (C)"},
    {"A8", Source::kWeather, "Maximum temperature (C)"},
    {"A9", Source::kWeather, "Atmospheric pressure (hPa)"},
    {"A10", Source::kWeather, "Main temperature (C)"},
    {"A11", Source::kWeather, "Humidity (%)"},
    {"A12", Source::kWeather, "Weather description"},
    {"A13", Source::kWeather, "Cloudiness (%)"},
    {"A14", Source::kWeather, "Wind direction (deg)"},
    {"A15", Source::kWeather, "Wind speed (m/s)"},
}};

struct SourceRange {
  std::size_t first;
  std::size_t count;
};

// Slots are laid out source by source: 3 beacon, 2 GPS, 11 env, 15 weather.
constexpr SourceRange source_range(Source source) noexcept {
  switch (source) {
    case Source::kBeacon: return {0, 3};
    case Source::kGps: return {3, 2};
    case Source::kEnv: return {5, 11};
    case Source::kWeather: return {16, 15};
  }
  return {0, 0};
}

std::optional<std::size_t> slot_index(std::string_view code) noexcept;

enum class SlotError : std::uint8_t {
  kSourceUnavailable,  // source absent or stale at click time
  kFieldMissing,       // source present but this field was not delivered
};

std::string_view slot_error_name(SlotError error) noexcept;
std::optional<SlotError> parse_slot_error(std::string_view name) noexcept;

class Slot {
 public:
  using Content = std::variant<SlotError, std::int64_t, double, std::string>;

  Slot() : content_(SlotError::kSourceUnavailable) {}
  explicit Slot(Content content) : content_(std::move(content)) {}

  static Slot error(SlotError e) { return Slot(Content(e)); }
  static Slot integer(std::int64_t v) { return Slot(Content(v)); }
  static Slot real(double v) { return Slot(Content(v)); }
  static Slot text(std::string v) { return Slot(Content(std::move(v))); }

  bool has_value() const noexcept { return !std::holds_alternative<SlotError>(content_); }
  std::optional<SlotError> error_kind() const noexcept;
  const Content& content() const noexcept { return content_; }

  friend bool operator==(const Slot&, const Slot&) = default;

 private:
  Content content_;
};

struct DataRecord {
  std::string event_id;
  std::string session_id;
  std::string behavior_name;
  std::string category_name;
  TimestampMs clicked_at = 0;
  std::array<Slot, kSlotCount> slots;

  std::size_t value_count() const noexcept;
  std::size_t error_count() const noexcept { return kSlotCount - value_count(); }
  std::size_t value_count(Source source) const noexcept;
  std::span<const Slot> source_slots(Source source) const noexcept;
  const Slot& slot(std::string_view code) const;

  friend bool operator==(const DataRecord&, const DataRecord&) = default;
};

DataRecord flatten_record(std::string event_id, std::string session_id,
                          const BehaviorDefinition& behavior, TimestampMs clicked_at,
                          const SensorSnapshot& snapshot);

}  // namespace exl::core
