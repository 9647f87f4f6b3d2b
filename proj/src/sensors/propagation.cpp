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

#include "sensors/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "core/error.hpp"

namespace exl::sensors {

double distance(Point a, Point b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

bool Room::contains(Point p) const noexcept {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
}

void BeaconPlacement::validate() const {
  std::vector<std::string> problems;
  if (uuid.empty()) problems.emplace_back("uuid: must not be empty");
  if (!std::isfinite(position.x) || !std::isfinite(position.y))
    problems.emplace_back("position: coordinates must be finite");
  if (!(tx_power_at_1m >= -80.0 && tx_power_at_1m <= -40.0))
    problems.emplace_back("tx_power_at_1m: outside [-80, -40] dBm");
  if (!problems.empty()) throw SchemaError(std::move(problems));
}

std::optional<std::size_t> FloorPlan::room_of(Point p) const noexcept {
  std::optional<std::size_t> found;
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    if (!rooms[i].contains(p)) continue;
    if (found) return std::nullopt;
    found = i;
  }
  return found;
}

void FloorPlan::validate(std::span<const BeaconPlacement> placements) const {
  std::vector<std::string> problems;
  for (const auto& w : walls) {
    if (!(w.attenuation_db >= 0.0)) problems.emplace_back("wall: attenuation_db must be >= 0");
  }
  for (const auto& p : placements) {
    try {
      p.validate();
    } catch (const SchemaError& e) {
      for (const auto& d : e.diagnostics()) problems.push_back(p.uuid + ": " + d);
      continue;
    }
    if (!room_of(p.position)) {
      problems.push_back(fmt::format("{}: position ({}, {}) is not inside exactly one room",
                                     p.uuid, p.position.x, p.position.y));
    }
  }
  if (!problems.empty()) throw SchemaError(std::move(problems));
}

namespace {

double cross(Point o, Point a, Point b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point p, Point a, Point b) noexcept {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_touch(Point p1, Point p2, Point q1, Point q2) noexcept {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return (d1 == 0 && on_segment(p1, q1, q2)) || (d2 == 0 && on_segment(p2, q1, q2)) ||
         (d3 == 0 && on_segment(q1, p1, p2)) || (d4 == 0 && on_segment(q2, p1, p2));
}

}  // namespace

double FloorPlan::wall_loss_db(Point a, Point b) const noexcept {
  double loss = 0.0;
  for (const auto& w : walls) {
    if (segments_touch(a, b, w.from, w.to)) loss += w.attenuation_db;
  }
  return loss;
}

double rssi_at(const BeaconPlacement& placement, Point device, const FloorPlan& plan,
               double noise_sigma_db, std::uint64_t seed, const PropagationModel& model) {
  const double d = std::max(distance(placement.position, device), model.min_distance_m);
  double rssi = placement.tx_power_at_1m - 10.0 * model.path_loss_exponent * std::log10(d) -
                plan.wall_loss_db(placement.position, device);
  if (noise_sigma_db > 0.0) {
    double sigma = noise_sigma_db;
    if (d < model.near_field_radius_m) sigma += model.near_field_extra_sigma_db;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> shadowing(0.0, sigma);
    rssi += shadowing(rng);
  }
  return rssi;
}

std::vector<core::BeaconReading> scan_beacons(const FloorPlan& plan,
                                              std::span<const BeaconPlacement> placements,
                                              Point device, const ScanParams& params,
                                              TimestampMs now) {
  if (!(params.detect_floor_dbm >= -110.0 && params.detect_floor_dbm <= -60.0)) {
    throw Error(ErrorCode::kInvalidArgument, "detect_floor_dbm must lie in [-110, -60]");
  }
  std::vector<core::BeaconReading> out;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const auto& p = placements[i];
    const double rssi =
        rssi_at(p, device, plan, params.noise_sigma_db, mix_seed(params.seed, i), params.model);
    if (rssi < params.detect_floor_dbm) continue;
    const int reported = std::min(0, static_cast<int>(std::lround(rssi)));
    out.push_back(core::BeaconReading{p.uuid, reported, p.beacon_name, now});
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ClassroomLayout make_classroom_grid(int cols, int rows, double room_width_m,
                                    double room_depth_m, double wall_db,
                                    double tx_power_at_1m) {
  if (cols <= 0 || rows <= 0 || !(room_width_m > 0) || !(room_depth_m > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "classroom grid needs positive dimensions");
  }
  ClassroomLayout layout;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int n = r * cols + c + 1;
      Room room{fmt::format("room{}", n),
                {c * room_width_m, r * room_depth_m},
                {(c + 1) * room_width_m, (r + 1) * room_depth_m}};
      layout.placements.push_back(BeaconPlacement{
          fmt::format("B9407F30-F5F8-466E-AFF9-25556B57FE{:02X}", n), fmt::format("iB-{}", n),
          {(c + 0.5) * room_width_m, (r + 0.5) * room_depth_m}, tx_power_at_1m});
      layout.plan.rooms.push_back(std::move(room));
    }
  }
  // Shared edges: one wall segment per pair of adjacent rooms.
  for (int r = 0; r < rows; ++r) {
    for (int c = 1; c < cols; ++c) {
      layout.plan.walls.push_back(Wall{{c * room_width_m, r * room_depth_m},
                                       {c * room_width_m, (r + 1) * room_depth_m},
                                       wall_db});
    }
  }
  for (int r = 1; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      layout.plan.walls.push_back(Wall{{c * room_width_m, r * room_depth_m},
                                       {(c + 1) * room_width_m, r * room_depth_m},
                                       wall_db});
    }
  }
  return layout;
}

}  // namespace exl::sensors
