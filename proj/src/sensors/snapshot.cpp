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

#include "sensors/snapshot.hpp"

#include "core/error.hpp"

namespace exl::sensors {

SourcesLatest SourceCells::read() const {
  SourcesLatest out;
  if (auto b = beacons.get()) out.beacons = std::move(*b);
  out.gps = gps.get();
  out.env = env.get();
  out.weather = weather.get();
  return out;
}

void SourceCells::clear(core::Source source) {
  switch (source) {
    case core::Source::kBeacon: beacons.clear(); break;
    case core::Source::kGps: gps.clear(); break;
    case core::Source::kEnv: env.clear(); break;
    case core::Source::kWeather: weather.clear(); break;
  }
}

namespace {

bool fresh(TimestampMs observed_at, TimestampMs now, TimestampMs window) {
  const TimestampMs age = now - observed_at;
  return age >= 0 && age <= window;
}

template <typename T>
std::optional<T> keep_if_fresh(const std::optional<T>& v, TimestampMs now, TimestampMs window) {
  if (v && fresh(v->observed_at, now, window)) return v;
  return std::nullopt;
}

}  // namespace

core::SensorSnapshot assemble_snapshot(const SourcesLatest& latest, TimestampMs now,
                                       TimestampMs freshness_window_ms) {
  if (freshness_window_ms <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "freshness window must be > 0");
  }
  core::SensorSnapshot snap;
  snap.assembled_at = now;
  for (const auto& b : latest.beacons) {
    if (fresh(b.observed_at, now, freshness_window_ms)) snap.beacons.push_back(b);
  }
  snap.gps = keep_if_fresh(latest.gps, now, freshness_window_ms);
  snap.env = keep_if_fresh(latest.env, now, freshness_window_ms);
  snap.weather = keep_if_fresh(latest.weather, now, freshness_window_ms);
  return snap;
}

}  // namespace exl::sensors
