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

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>

#include "core/clock.hpp"
#include "sensors/simulated.hpp"
#include "sensors/snapshot.hpp"
#include "sensors/weather.hpp"
#include "sim/scenario.hpp"

namespace exl::sim {

// Publishes one round of simulated readings for the scenario's device into the
// source cells. Sources inside an outage window are cleared instead.
class SourceSampler {
 public:
  SourceSampler(const ScenarioConfig& scenario, sensors::SourceCells& cells);
  ~SourceSampler();

  // `round` seeds the beacon shadowing; `offset` is time since scenario start.
  void sample(std::uint64_t round, TimestampMs offset);

 private:
  const ScenarioConfig& sc_;
  sensors::SourceCells& cells_;
  sensors::GpsSimulator gps_;
  sensors::EnvSimulator env_;
  sensors::WeatherPayloadSimulator weather_sim_;
  std::unique_ptr<sensors::WeatherClient> weather_client_;
};

// Samples on a background thread against a real clock, for a served capture
// endpoint with no hardware attached. Offsets count from construction.
class LiveSensorFeed {
 public:
  LiveSensorFeed(ScenarioConfig scenario, sensors::SourceCells& cells, const Clock& clock);
  ~LiveSensorFeed();

  LiveSensorFeed(const LiveSensorFeed&) = delete;
  LiveSensorFeed& operator=(const LiveSensorFeed&) = delete;

  void tick();
  void start(std::chrono::milliseconds period);
  void stop();

 private:
  ScenarioConfig sc_;
  const Clock& clock_;
  TimestampMs origin_;
  SourceSampler sampler_;
  std::uint64_t round_ = 0;
  std::mutex mu_;
  std::condition_variable wake_;
  bool stopping_ = false;
  std::thread worker_;
};

}  // namespace exl::sim
