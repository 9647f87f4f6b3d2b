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

#include <mutex>
#include <optional>
#include <vector>

#include "core/clock.hpp"
#include "core/model.hpp"

namespace exl::sensors {

inline constexpr TimestampMs kDefaultFreshnessWindowMs = 30'000;

// Single-slot mailbox written by one producer and read by any number of readers.
template <typename T>
class LatestValue {
 public:
  void publish(T value) {
    std::lock_guard lock(mu_);
    value_ = std::move(value);
  }
  void clear() {
    std::lock_guard lock(mu_);
    value_.reset();
  }
  std::optional<T> get() const {
    std::lock_guard lock(mu_);
    return value_;
  }

 private:
  mutable std::mutex mu_;
  std::optional<T> value_;
};

// Plain copy of every source's latest reading.
struct SourcesLatest {
  std::vector<core::BeaconReading> beacons;
  std::optional<core::GpsFix> gps;
  std::optional<core::EnvFrame> env;
  std::optional<core::WeatherSnapshot> weather;
};

struct SourceCells {
  LatestValue<std::vector<core::BeaconReading>> beacons;
  LatestValue<core::GpsFix> gps;
  LatestValue<core::EnvFrame> env;
  LatestValue<core::WeatherSnapshot> weather;

  // Each cell is read atomically on its own; no cross-source atomicity.
  SourcesLatest read() const;
  void clear(core::Source source);
};

// Keeps a reading iff 0 <= now - observed_at <= freshness_window_ms.
core::SensorSnapshot assemble_snapshot(const SourcesLatest& latest, TimestampMs now,
                                       TimestampMs freshness_window_ms = kDefaultFreshnessWindowMs);

}  // namespace exl::sensors
