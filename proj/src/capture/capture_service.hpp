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
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "capture/event_log.hpp"
#include "capture/store_client.hpp"
#include "capture/sync_queue.hpp"
#include "core/clock.hpp"
#include "core/registry.hpp"
#include "sensors/snapshot.hpp"

namespace exl::capture {

struct Session {
  std::string session_id;
  TimestampMs started_at = 0;
  std::optional<TimestampMs> ended_at;
  std::uint64_t registry_revision = 0;
  std::optional<std::string> location_label;

  bool open() const noexcept { return !ended_at.has_value(); }
};

struct CaptureConfig {
  std::string device_id = "device-1";
  TimestampMs freshness_window_ms = sensors::kDefaultFreshnessWindowMs;
  BackoffPolicy backoff;
  std::filesystem::path log_path;  // optional write-through mirror of the event log
};

struct SourceStatus {
  core::Source source = core::Source::kBeacon;
  std::optional<TimestampMs> age_ms;  // nullopt when the source never reported
  bool fresh = false;
};

struct CaptureStatus {
  TimestampMs now = 0;
  TimestampMs freshness_window_ms = 0;
  std::vector<SourceStatus> sources;
  std::optional<core::BeaconReading> nearest_beacon;
  QueueCounts queue;
  std::optional<Session> session;
  std::uint64_t registry_revision = 0;
  std::size_t log_size = 0;
};

class CaptureService {
 public:
  CaptureService(const Clock& clock, sensors::SourceCells& cells, StoreClient& store,
                 core::BehaviorRegistry registry = core::default_registry(),
                 CaptureConfig config = {});
  ~CaptureService();

  CaptureService(const CaptureService&) = delete;
  CaptureService& operator=(const CaptureService&) = delete;

  Session start_session(std::optional<std::string> location_label = std::nullopt);
  Session end_session();
  std::optional<Session> current_session() const;
  std::optional<Session> find_session(std::string_view session_id) const;
  std::vector<Session> sessions() const;

  // Resolves the behavior, joins the current snapshot and appends one record.
  // An empty session_id means the open session. Category may be omitted when
  // the behavior name is unambiguous.
  core::DataRecord record_behavior(std::string_view session_id, std::string_view behavior_name,
                                   std::optional<std::string_view> category_name);

  std::size_t drain();
  std::size_t replay_acked();
  std::string export_log(std::string_view session_id) const;

  core::BehaviorRegistry registry() const;
  core::BehaviorRegistry upsert_behavior(const core::BehaviorDefinition& def);
  core::BehaviorRegistry replace_registry(const std::vector<core::BehaviorDefinition>& defs);

  CaptureStatus status() const;

  const SyncQueue& queue() const noexcept { return queue_; }
  const EventLog& log() const noexcept { return log_; }
  const CaptureConfig& config() const noexcept { return config_; }

  // Drains on a timer until stopped. Harmless to call twice.
  void start_background_sync(std::chrono::milliseconds period);
  void stop_background_sync();

 private:
  const Clock& clock_;
  sensors::SourceCells& cells_;
  StoreClient& store_;
  CaptureConfig config_;

  mutable std::mutex mu_;  // registry, sessions, click ordering
  core::BehaviorRegistry registry_;
  std::vector<Session> sessions_;
  std::optional<std::size_t> open_index_;
  std::uint64_t session_seq_ = 0;
  std::map<std::string, std::uint64_t, std::less<>> counters_;
  TimestampMs last_clicked_at_ = 0;

  EventLog log_;
  SyncQueue queue_;

  std::mutex sync_mu_;
  std::condition_variable sync_cv_;
  bool sync_stop_ = false;
  bool sync_kick_ = false;
  std::thread sync_thread_;
};

}  // namespace exl::capture
