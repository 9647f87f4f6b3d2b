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

#include "sim/live_feed.hpp"

#include "core/error.hpp"
#include "sensors/propagation.hpp"

namespace exl::sim {

namespace {

core::Source source_of(FaultTarget target) {
  switch (target) {
    case FaultTarget::kBeacon: return core::Source::kBeacon;
    case FaultTarget::kGps: return core::Source::kGps;
    case FaultTarget::kEnv: return core::Source::kEnv;
    default: return core::Source::kWeather;
  }
}

}  // namespace

SourceSampler::SourceSampler(const ScenarioConfig& sc, sensors::SourceCells& cells)
    : sc_(sc),
      cells_(cells),
      gps_{sc.latitude, sc.longitude, 0.0001, sensors::mix_seed(sc.seed, 1)},
      env_{sensors::mix_seed(sc.seed, 2)},
      weather_sim_{sensors::mix_seed(sc.seed, 3)} {
  if (sc.weather == SimWeather::kFixture || sc.weather == SimWeather::kLive) {
    sensors::WeatherClientConfig wc;
    wc.mode = sc.weather == SimWeather::kFixture ? sensors::WeatherMode::kFixture
                                                 : sensors::WeatherMode::kLive;
    wc.fixture_dir = sc.weather_fixture_dir;
    weather_client_ = std::make_unique<sensors::WeatherClient>(std::move(wc));
  }
}

SourceSampler::~SourceSampler() = default;

void SourceSampler::sample(std::uint64_t round, TimestampMs offset) {
  const TimestampMs t = sc_.start_ms + offset;
  for (FaultTarget target :
       {FaultTarget::kBeacon, FaultTarget::kGps, FaultTarget::kEnv, FaultTarget::kWeather}) {
    if (sc_.outage(target, offset)) cells_.clear(source_of(target));
  }
  if (!sc_.outage(FaultTarget::kBeacon, offset)) {
    sensors::ScanParams scan;
    scan.detect_floor_dbm = sc_.detect_floor_dbm;
    scan.noise_sigma_db = sc_.noise_sigma_db;
    scan.seed = sensors::mix_seed(sc_.seed, 1000 + round);
    cells_.beacons.publish(
        sensors::scan_beacons(sc_.plan, sc_.beacons, sc_.device_at(offset), scan, t));
  }
  const core::GpsFix fix = gps_.sample(t);
  if (!sc_.outage(FaultTarget::kGps, offset)) cells_.gps.publish(fix);
  if (!sc_.outage(FaultTarget::kEnv, offset)) cells_.env.publish(env_.sample(t));
  if (sc_.outage(FaultTarget::kWeather, offset)) return;
  try {
    switch (sc_.weather) {
      case SimWeather::kSimulated:
        cells_.weather.publish(sensors::parse_weather_payload(
            nlohmann::json::parse(weather_sim_.payload_json(fix.latitude, fix.longitude, t)), t,
            core::WeatherSourceMode::kSimulated));
        break;
      case SimWeather::kFixture:
      case SimWeather::kLive:
        cells_.weather.publish(weather_client_->fetch_weather(fix.latitude, fix.longitude, t));
        break;
      case SimWeather::kOff:
        cells_.weather.clear();
        break;
    }
  } catch (const Error&) {
    cells_.weather.clear();
  }
}

LiveSensorFeed::LiveSensorFeed(ScenarioConfig scenario, sensors::SourceCells& cells,
                               const Clock& clock)
    : sc_(std::move(scenario)), clock_(clock), origin_(clock.now_ms()), sampler_(sc_, cells) {
  sc_.start_ms = origin_;
}

LiveSensorFeed::~LiveSensorFeed() { stop(); }

void LiveSensorFeed::tick() { sampler_.sample(round_++, clock_.now_ms() - origin_); }

void LiveSensorFeed::start(std::chrono::milliseconds period) {
  stop();
  {
    std::lock_guard lock(mu_);
    stopping_ = false;
  }
  tick();
  worker_ = std::thread([this, period] {
    std::unique_lock lock(mu_);
    while (!wake_.wait_for(lock, period, [this] { return stopping_; })) {
      lock.unlock();
      tick();
      lock.lock();
    }
  });
}

void LiveSensorFeed::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  wake_.notify_all();
  if (worker_.joinable()) worker_.join();
}

}  // namespace exl::sim
