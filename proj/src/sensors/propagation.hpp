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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/clock.hpp"
#include "core/model.hpp"

namespace exl::sensors {

// Floor-plan coordinates in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b) noexcept;

struct Room {
  std::string room_id;
  Point min;
  Point max;

  // Boundary points count as inside.
  bool contains(Point p) const noexcept;
};

struct Wall {
  Point from;
  Point to;
  double attenuation_db = 0.0;
};

struct BeaconPlacement {
  std::string uuid;
  std::string beacon_name;
  Point position;
  double tx_power_at_1m = -59.0;  // dBm

  void validate() const;
};

struct FloorPlan {
  std::vector<Room> rooms;
  std::vector<Wall> walls;

  // Index of the single room containing p; nullopt if none or several.
  std::optional<std::size_t> room_of(Point p) const noexcept;
  // Throws SchemaError when a placement is invalid or not inside exactly one room.
  void validate(std::span<const BeaconPlacement> placements) const;
  // Summed attenuation of every wall the straight path a-b touches.
  double wall_loss_db(Point a, Point b) const noexcept;
};

struct PropagationModel {
  double path_loss_exponent = 2.0;
  double min_distance_m = 0.1;
  // Receiver interference close to the beacon, applied only when shadowing is on.
  double near_field_radius_m = 1.0;
  double near_field_extra_sigma_db = 4.0;
};

// tx - 10 n log10(d) - walls + N(0, sigma). Deterministic for a given seed.
double rssi_at(const BeaconPlacement& placement, Point device, const FloorPlan& plan,
               double noise_sigma_db, std::uint64_t seed, const PropagationModel& model = {});

struct ScanParams {
  double detect_floor_dbm = -95.0;
  double noise_sigma_db = 0.0;
  std::uint64_t seed = 0;
  PropagationModel model;
};

// One reading per placement whose simulated RSSI reaches the detection floor.
std::vector<core::BeaconReading> scan_beacons(const FloorPlan& plan,
                                              std::span<const BeaconPlacement> placements,
                                              Point device, const ScanParams& params,
                                              TimestampMs now);

// splitmix64 step, for deriving independent streams from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

struct ClassroomLayout {
  FloorPlan plan;
  std::vector<BeaconPlacement> placements;  // one per room, at the room centre
};

// cols x rows grid of equal rooms; every shared edge is a wall of wall_db.
ClassroomLayout make_classroom_grid(int cols, int rows, double room_width_m,
                                    double room_depth_m, double wall_db,
                                    double tx_power_at_1m = -59.0);

}  // namespace exl::sensors
