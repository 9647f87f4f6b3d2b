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

#include "core/model.hpp"

#include <cmath>
#include <type_traits>
#include <utility>

#include "core/error.hpp"
#include "sensors/proximity.hpp"

namespace exl::core {

void BehaviorDefinition::validate() const {
  std::vector<std::string> problems;
  if (category_code < 0) problems.push_back("category_code: must be >= 0");
  if (behavior_name.empty()) problems.push_back("behavior_name: must not be empty");
  if (category_name.empty()) problems.push_back("category_name: must not be empty");
  if (!problems.empty()) throw SchemaError(std::move(problems));
}

void GpsFix::validate() const {
  std::vector<std::string> problems;
  if (!(latitude >= -90.0 && latitude <= 90.0)) problems.push_back("latitude: outside [-90, 90]");
  if (!(longitude >= -180.0 && longitude <= 180.0))
    problems.push_back("longitude: outside [-180, 180]");
  if (!problems.empty()) throw SchemaError(std::move(problems));
}

std::array<std::optional<double>, EnvFrame::kChannelCount> EnvFrame::channels() const {
  return {uv_range,       geomag_range_g1, geomag_range_g2, geomag_range_g3,
          geomag_res_ut1, geomag_res_ut2,  geomag_res_ut3,  ambient_light,
          pressure,       temperature,     humidity};
}

void EnvFrame::validate() const {
  std::vector<std::string> problems;
  if (uv_range && *uv_range < 0) problems.push_back("S1: uv_range must be >= 0");
  if (ambient_light && *ambient_light < 0) problems.push_back("S8: ambient_light must be >= 0");
  if (pressure && *pressure <= 0) problems.push_back("S9: pressure must be > 0");
  if (humidity && (*humidity < 0 || *humidity > 100))
    problems.push_back("S11: humidity outside [0, 100]");
  for (const auto& c : channels()) {
    if (c && !std::isfinite(*c)) {
      problems.push_back("channel value is not finite");
      break;
    }
  }
  if (!problems.empty()) throw SchemaError(std::move(problems));
}

std::size_t WeatherSnapshot::present_count() const {
  std::size_t n = 0;
  n += country_name.has_value();
  n += location_name.has_value();
  n += weather.has_value();
  n += sunset_time.has_value();
  n += sunrise_time.has_value();
  n += current_time.has_value();
  n += temp_min.has_value();
  n += temp_max.has_value();
  n += pressure.has_value();
  n += temp_main.has_value();
  n += humidity.has_value();
  n += weather_description.has_value();
  n += cloudiness.has_value();
  n += wind_direction.has_value();
  n += wind_speed.has_value();
  return n;
}

void WeatherSnapshot::validate() const {
  std::vector<std::string> problems;
  if (temp_min && temp_main && temp_max &&
      !(*temp_min <= *temp_main && *temp_main <= *temp_max)) {
    problems.push_back("A7/A10/A8: expected temp_min <= temp_main <= temp_max");
  }
  if (wind_direction && (*wind_direction < 0 || *wind_direction >= 360))
    problems.push_back("A14: wind_direction outside [0, 360)");
  if (wind_speed && *wind_speed < 0) problems.push_back("A15: wind_speed must be >= 0");
  if (!problems.empty()) throw SchemaError(std::move(problems));
}

std::string_view source_name(Source source) noexcept {
  switch (source) {
    case Source::kBeacon: return "iBeacon";
    case Source::kGps: return "GPS";
    case Source::kEnv: return "ALPS";
    case Source::kWeather: return "Weather API";
  }
  return "?";
}

std::optional<std::size_t> slot_index(std::string_view code) noexcept {
  for (std::size_t i = 0; i < kSlotSpecs.size(); ++i) {
    if (kSlotSpecs[i].code == code) return i;
  }
  return std::nullopt;
}

std::string_view slot_error_name(SlotError error) noexcept {
  switch (error) {
    case SlotError::kSourceUnavailable: return "source-unavailable";
    case SlotError::kFieldMissing: return "field-missing";
  }
  return "?";
}

std::optional<SlotError> parse_slot_error(std::string_view name) noexcept {
  if (name == "source-unavailable") return SlotError::kSourceUnavailable;
  if (name == "field-missing") return SlotError::kFieldMissing;
  return std::nullopt;
}

std::optional<SlotError> Slot::error_kind() const noexcept {
  if (const auto* e = std::get_if<SlotError>(&content_)) return *e;
  return std::nullopt;
}

std::size_t DataRecord::value_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : slots) n += s.has_value();
  return n;
}

std::size_t DataRecord::value_count(Source source) const noexcept {
  std::size_t n = 0;
  for (const auto& s : source_slots(source)) n += s.has_value();
  return n;
}

std::span<const Slot> DataRecord::source_slots(Source source) const noexcept {
  const auto range = source_range(source);
  return std::span<const Slot>(slots).subspan(range.first, range.count);
}

const Slot& DataRecord::slot(std::string_view code) const {
  const auto idx = slot_index(code);
  if (!idx) throw Error(ErrorCode::kNotFound, "unknown slot code: " + std::string(code));
  return slots[*idx];
}

namespace {

template <typename T>
Slot optional_slot(const std::optional<T>& value) {
  if (!value) return Slot::error(SlotError::kFieldMissing);
  if constexpr (std::is_same_v<T, std::string>) {
    return Slot::text(*value);
  } else if constexpr (std::is_integral_v<T>) {
    return Slot::integer(*value);
  } else {
    return Slot::real(*value);
  }
}

}  // namespace

DataRecord flatten_record(std::string event_id, std::string session_id,
                          const BehaviorDefinition& behavior, TimestampMs clicked_at,
                          const SensorSnapshot& snapshot) {
  DataRecord record;
  record.event_id = std::move(event_id);
  record.session_id = std::move(session_id);
  record.behavior_name = behavior.behavior_name;
  record.category_name = behavior.category_name;
  record.clicked_at = clicked_at;
  // Default-constructed slots already carry kSourceUnavailable.

  if (const auto nearest = sensors::nearest_beacon(snapshot.beacons)) {
    record.slots[0] = Slot::text(nearest->uuid);
    record.slots[1] = Slot::integer(nearest->rssi);
    record.slots[2] = Slot::text(nearest->beacon_name);
  }
  if (snapshot.gps) {
    record.slots[3] = Slot::real(snapshot.gps->longitude);
    record.slots[4] = Slot::real(snapshot.gps->latitude);
  }
  if (snapshot.env) {
    const auto channels = snapshot.env->channels();
    const auto range = source_range(Source::kEnv);
    for (std::size_t i = 0; i < channels.size(); ++i) {
      record.slots[range.first + i] = optional_slot(channels[i]);
    }
  }
  if (snapshot.weather) {
    const auto& w = *snapshot.weather;
    const auto first = source_range(Source::kWeather).first;
    const std::array<Slot, WeatherSnapshot::kParameterCount> params = {
        optional_slot(w.country_name), optional_slot(w.location_name),
        optional_slot(w.weather),      optional_slot(w.sunset_time),
        optional_slot(w.sunrise_time), optional_slot(w.current_time),
        optional_slot(w.temp_min),     optional_slot(w.temp_max),
        optional_slot(w.pressure),     optional_slot(w.temp_main),
        optional_slot(w.humidity),     optional_slot(w.weather_description),
        optional_slot(w.cloudiness),   optional_slot(w.wind_direction),
        optional_slot(w.wind_speed)};
    for (std::size_t i = 0; i < params.size(); ++i) record.slots[first + i] = params[i];
  }
  return record;
}

}  // namespace exl::core
