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

#include "sim/same_room.hpp"

#include <random>

#include "core/error.hpp"
#include "sensors/propagation.hpp"
#include "sensors/proximity.hpp"

namespace exl::sim {

SameRoomResult same_room_accuracy(const SameRoomParams& p) {
  if (!(p.margin_m >= 0 && 2 * p.margin_m < p.room_m)) {
    throw Error(ErrorCode::kInvalidArgument, "margin must leave room for positions");
  }
  const auto layout =
      sensors::make_classroom_grid(p.columns, p.rows, p.room_m, p.room_m, p.wall_db);
  std::mt19937_64 rng(sensors::mix_seed(p.seed, 0x5A3E));
  std::uniform_int_distribution<std::size_t> pick_room(0, layout.plan.rooms.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SameRoomResult res;
  res.scans = p.scans;
  for (std::size_t i = 0; i < p.scans; ++i) {
    const std::size_t room = pick_room(rng);
    const auto& r = layout.plan.rooms[room];
    const sensors::Point device{
        r.min.x + p.margin_m + unit(rng) * (r.max.x - r.min.x - 2 * p.margin_m),
        r.min.y + p.margin_m + unit(rng) * (r.max.y - r.min.y - 2 * p.margin_m)};
    sensors::ScanParams scan;
    scan.noise_sigma_db = p.noise_sigma_db;
    scan.detect_floor_dbm = p.detect_floor_dbm;
    scan.seed = sensors::mix_seed(p.seed, i);
    const auto readings = sensors::scan_beacons(layout.plan, layout.placements, device, scan, 0);
    const auto nearest = sensors::nearest_beacon(readings);
    if (!nearest) {
      ++res.undetected;
    } else if (nearest->uuid == layout.placements[room].uuid) {
      ++res.matches;
    }
  }
  return res;
}

}  // namespace exl::sim
