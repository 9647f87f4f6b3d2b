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

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "capture/store_client.hpp"
#include "core/codec.hpp"
#include "sim/scenario.hpp"

namespace exl::sim {

struct SimulationOptions {
  std::optional<std::uint64_t> seed;
  std::optional<TimestampMs> freshness_window_ms;
  std::optional<SimWeather> weather;
  std::optional<std::string> store_url;  // post to a running store instead of an in-process one
  std::filesystem::path out_dir;         // empty: nothing is written
};

struct SourceLoss {
  core::Source source = core::Source::kBeacon;
  std::size_t records_missing = 0;  // records with at least one error slot for this source
  std::size_t error_slots = 0;
  std::size_t value_slots = 0;
};

struct SimulationResult {
  std::string session_id;
  std::vector<core::DataRecord> records;  // local log, click order
  std::string events_text;                // exported event log
  std::string store_text;                 // store contents, sequence order
  std::size_t clicks = 0;
  std::size_t store_count = 0;
  std::size_t distinct_store_event_ids = 0;
  std::size_t acked = 0;
  std::size_t failed = 0;
  std::size_t pending = 0;
  std::size_t deliveries = 0;
  std::size_t replay_mismatches = 0;
  std::size_t store_count_after_replay = 0;
  std::array<SourceLoss, 4> loss{};
};

// Wraps a store link and reports it unreachable while `open` says so.
class GatedStoreClient final : public capture::StoreClient {
 public:
  GatedStoreClient(capture::StoreClient& inner, std::function<bool()> open)
      : inner_(inner), open_(std::move(open)) {}
  capture::DeliveryResult deliver(const core::DataRecord& record) override;
  std::size_t deliveries() const noexcept { return deliveries_; }

 private:
  capture::StoreClient& inner_;
  std::function<bool()> open_;
  std::size_t deliveries_ = 0;
};

// Runs capture and store on a virtual clock: sensors are sampled at every
// click, sources in an outage window are cleared, the queue drains after each
// click and once more after the session until nothing is due. Outputs are a
// pure function of the scenario and options.
SimulationResult run_simulation(ScenarioConfig scenario, const SimulationOptions& options = {});

core::Json loss_summary_json(const SimulationResult& result, const ScenarioConfig& scenario);
std::string loss_summary_text(const SimulationResult& result, const ScenarioConfig& scenario);

}  // namespace exl::sim
