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

#include "sensors/simulated.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

#include "sensors/propagation.hpp"

namespace exl::sensors {

namespace {

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

}  // namespace

core::GpsFix GpsSimulator::sample(TimestampMs t) const {
  std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
  std::uniform_real_distribution<double> jitter(-jitter_deg, jitter_deg);
  core::GpsFix fix;
  fix.latitude = round_to(base_latitude + jitter(rng), 6);
  fix.longitude = round_to(base_longitude + jitter(rng), 6);
  fix.observed_at = t;
  return fix;
}

core::EnvFrame EnvSimulator::sample(TimestampMs t) const {
  std::mt19937_64 rng(mix_seed(seed ^ 0xE7E7E7E7ULL, static_cast<std::uint64_t>(t)));
  std::normal_distribution<double> n01(0.0, 1.0);
  auto around = [&](double mean, double sd, int decimals) {
    return round_to(mean + sd * n01(rng), decimals);
  };
  core::EnvFrame f;
  f.uv_range = std::max(0.0, around(0.05, 0.01, 3));
  f.geomag_range_g1 = around(0.0, 0.02, 3);
  f.geomag_range_g2 = around(0.0, 0.02, 3);
  f.geomag_range_g3 = around(1.0, 0.02, 3);
  f.geomag_res_ut1 = around(28.0, 1.5, 1);
  f.geomag_res_ut2 = around(-4.0, 1.5, 1);
  f.geomag_res_ut3 = around(38.0, 1.5, 1);
  f.ambient_light = std::max(0.0, around(420.0, 40.0, 0));
  f.pressure = around(1012.0, 1.0, 1);
  f.temperature = around(23.5, 0.5, 1);
  f.humidity = std::clamp(around(52.0, 3.0, 1), 0.0, 100.0);
  f.observed_at = t;
  return f;
}

std::string WeatherPayloadSimulator::payload_json(double latitude, double longitude,
                                                  TimestampMs t) const {
  std::mt19937_64 rng(mix_seed(seed ^ 0x5EA7ULL, static_cast<std::uint64_t>(t / 60'000)));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double temp = round_to(14.0 + 6.0 * u(rng), 2);
  const std::int64_t now_s = t / 1000;
  nlohmann::ordered_json j;
  j["coord"] = {{"lon", longitude}, {"lat", latitude}};
  j["weather"] = nlohmann::ordered_json::array(
      {{{"id", 803}, {"main", "Clouds"}, {"description", "broken clouds"}, {"icon", "04d"}}});
  j["main"] = {{"temp", temp},
               {"feels_like", temp - 0.4},
               {"temp_min", round_to(temp - 1.5, 2)},
               {"temp_max", round_to(temp + 1.2, 2)},
               {"pressure", 1013},
               {"humidity", 64}};
  j["wind"] = {{"speed", round_to(1.0 + 3.0 * u(rng), 2)},
               {"deg", static_cast<int>(360.0 * u(rng)) % 360}};
  j["clouds"] = {{"all", 75}};
  j["dt"] = now_s;
  j["sys"] = {{"country", country}, {"sunrise", now_s - 4 * 3600}, {"sunset", now_s + 7 * 3600}};
  j["name"] = location;
  j["cod"] = 200;
  return j.dump();
}

}  // namespace exl::sensors
