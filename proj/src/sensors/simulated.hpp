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

#include "core/clock.hpp"
#include "core/model.hpp"

namespace exl::sensors {

// Stand-ins for the phone GPS and the BLE environment module. Output is a pure
// function of (seed, t).

struct GpsSimulator {
  double base_latitude = 34.79;
  double base_longitude = 132.78;
  double jitter_deg = 0.0001;
  std::uint64_t seed = 0;

  core::GpsFix sample(TimestampMs t) const;
};

struct EnvSimulator {
  std::uint64_t seed = 0;

  // Indoor classroom conditions with small per-sample variation.
  core::EnvFrame sample(TimestampMs t) const;
};

// Synthetic current-weather payload in the OpenWeatherMap response shape.
struct WeatherPayloadSimulator {
  std::uint64_t seed = 0;
  std::string country = "JP";
  std::string location = "Matsuyama";

  std::string payload_json(double latitude, double longitude, TimestampMs t) const;
};

}  // namespace exl::sensors
