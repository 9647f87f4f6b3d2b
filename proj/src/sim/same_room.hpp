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

#include <cstddef>
#include <cstdint>

namespace exl::sim {

struct SameRoomParams {
  int columns = 4;
  int rows = 2;
  double room_m = 8.0;
  double wall_db = 15.0;
  double noise_sigma_db = 4.0;
  double detect_floor_dbm = -95.0;
  double margin_m = 0.5;  // keep positions this far from walls
  std::size_t scans = 10'000;
  std::uint64_t seed = 1;
};

struct SameRoomResult {
  std::size_t scans = 0;
  std::size_t matches = 0;       // nearest beacon is the occupant's room beacon
  std::size_t undetected = 0;    // no beacon above the floor
  double rate() const noexcept {
    return scans ? static_cast<double>(matches) / static_cast<double>(scans) : 0.0;
  }
};

// Random in-room device positions on a classroom grid with one beacon per
// room; counts how often the strongest beacon belongs to the same room.
SameRoomResult same_room_accuracy(const SameRoomParams& params);

}  // namespace exl::sim
