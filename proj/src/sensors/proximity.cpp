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

#include "sensors/proximity.hpp"

namespace exl::sensors {

std::optional<core::BeaconReading> nearest_beacon(std::span<const core::BeaconReading> readings) {
  const core::BeaconReading* best = nullptr;
  for (const auto& r : readings) {
    if (!best || r.rssi > best->rssi || (r.rssi == best->rssi && r.uuid < best->uuid)) {
      best = &r;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

}  // namespace exl::sensors
