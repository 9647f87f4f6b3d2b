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

#include "capture/capture_service.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "core/error.hpp"
#include "sensors/proximity.hpp"

namespace exl::capture {

CaptureService::CaptureService(const Clock& clock, sensors::SourceCells& cells,
                               StoreClient& store, core::BehaviorRegistry registry,
                               CaptureConfig config)
    : clock_(clock),
      cells_(cells),
      store_(store),
      config_(std::move(config)),
      registry_(std::move(registry)),
      log_(config_.log_path),
      queue_(config_.backoff) {
  if (config_.freshness_window_ms <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "freshness window must be positive");
  }
  if (config_.device_id.empty()) throw Error(ErrorCode::kInvalidArgument, "device_id is empty");
}

CaptureService::~CaptureService() { stop_background_sync(); }

Session CaptureService::start_session(std::optional<std::string> location_label) {
  std::lock_guard lock(mu_);
  if (open_index_) {
    throw Error(ErrorCode::kState,
                "session already open: " + sessions_[*open_index_].session_id);
  }
  const TimestampMs now = std::max(clock_.now_ms(), last_clicked_at_);
  Session s;
  s.session_id = fmt::format("s{}-{}", ++session_seq_, now);
  s.started_at = now;
  s.registry_revision = registry_.revision();
  s.location_label = std::move(location_label);
  sessions_.push_back(s);
  open_index_ = sessions_.size() - 1;
  last_clicked_at_ = now;
  return s;
}

Session CaptureService::end_session() {
  std::lock_guard lock(mu_);
  if (!open_index_) throw Error(ErrorCode::kState, "no open session");
  Session& s = sessions_[*open_index_];
  s.ended_at = std::max(clock_.now_ms(), last_clicked_at_);
  open_index_.reset();
  return s;
}

std::optional<Session> CaptureService::current_session() const {
  std::lock_guard lock(mu_);
  if (!open_index_) return std::nullopt;
  return sessions_[*open_index_];
}

std::optional<Session> CaptureService::find_session(std::string_view session_id) const {
  std::lock_guard lock(mu_);
  for (const auto& s : sessions_) {
    if (s.session_id == session_id) return s;
  }
  return std::nullopt;
}

std::vector<Session> CaptureService::sessions() const {
  std::lock_guard lock(mu_);
  return sessions_;
}

core::DataRecord CaptureService::record_behavior(std::string_view session_id,
                                                 std::string_view behavior_name,
                                                 std::optional<std::string_view> category_name) {
  std::lock_guard lock(mu_);
  if (!open_index_) throw Error(ErrorCode::kState, "no open session");
  Session& session = sessions_[*open_index_];
  if (!session_id.empty() && session_id != session.session_id) {
    throw Error(ErrorCode::kState, fmt::format("session {} is not open", session_id));
  }
  std::optional<core::BehaviorDefinition> def =
      category_name ? registry_.find(behavior_name, *category_name)
                    : registry_.find_by_name(behavior_name);
  if (!def) {
    throw Error(ErrorCode::kNotFound,
                fmt::format("unknown behavior '{}'{}", behavior_name,
                            category_name ? fmt::format(" in category '{}'", *category_name)
                                          : std::string()));
  }

  const TimestampMs now = std::max({clock_.now_ms(), last_clicked_at_, session.started_at});
  auto snapshot =
      sensors::assemble_snapshot(cells_.read(), now, config_.freshness_window_ms);
  const std::uint64_t counter = ++counters_[session.session_id];
  auto record = core::flatten_record(
      fmt::format("{}/{}/{:05}", config_.device_id, session.session_id, counter),
      session.session_id, *def, now, snapshot);

  try {
    log_.append(record);
  } catch (...) {
    --counters_[session.session_id];
    throw;
  }
  last_clicked_at_ = now;
  queue_.enqueue(record, now);
  {
    std::lock_guard sync_lock(sync_mu_);
    sync_kick_ = true;
  }
  sync_cv_.notify_all();
  return record;
}

std::size_t CaptureService::drain() { return queue_.drain(store_, clock_.now_ms()); }

std::size_t CaptureService::replay_acked() { return queue_.replay_acked(store_); }

std::string CaptureService::export_log(std::string_view session_id) const {
  if (!find_session(session_id)) {
    throw Error(ErrorCode::kNotFound, fmt::format("unknown session {}", session_id));
  }
  return log_.export_text(session_id);
}

core::BehaviorRegistry CaptureService::registry() const {
  std::lock_guard lock(mu_);
  return registry_;
}

core::BehaviorRegistry CaptureService::upsert_behavior(const core::BehaviorDefinition& def) {
  std::lock_guard lock(mu_);
  registry_ = core::registry_upsert(registry_, def);
  return registry_;
}

core::BehaviorRegistry CaptureService::replace_registry(
    const std::vector<core::BehaviorDefinition>& defs) {
  std::lock_guard lock(mu_);
  registry_ = registry_.replaced(defs);
  return registry_;
}

CaptureStatus CaptureService::status() const {
  CaptureStatus st;
  st.now = clock_.now_ms();
  st.freshness_window_ms = config_.freshness_window_ms;
  const auto latest = cells_.read();

  auto add = [&](core::Source source, std::optional<TimestampMs> observed_at) {
    SourceStatus s;
    s.source = source;
    if (observed_at) {
      s.age_ms = st.now - *observed_at;
      s.fresh = *s.age_ms >= 0 && *s.age_ms <= config_.freshness_window_ms;
    }
    st.sources.push_back(s);
  };
  std::optional<TimestampMs> beacon_at;
  for (const auto& b : latest.beacons) {
    if (!beacon_at || b.observed_at > *beacon_at) beacon_at = b.observed_at;
  }
  add(core::Source::kBeacon, beacon_at);
  add(core::Source::kGps, latest.gps ? std::optional(latest.gps->observed_at) : std::nullopt);
  add(core::Source::kEnv, latest.env ? std::optional(latest.env->observed_at) : std::nullopt);
  add(core::Source::kWeather,
      latest.weather ? std::optional(latest.weather->observed_at) : std::nullopt);

  const auto snapshot = sensors::assemble_snapshot(latest, st.now, config_.freshness_window_ms);
  st.nearest_beacon = sensors::nearest_beacon(snapshot.beacons);
  st.queue = queue_.counts();
  st.log_size = log_.size();
  std::lock_guard lock(mu_);
  if (open_index_) st.session = sessions_[*open_index_];
  st.registry_revision = registry_.revision();
  return st;
}

void CaptureService::start_background_sync(std::chrono::milliseconds period) {
  std::lock_guard lock(sync_mu_);
  if (sync_thread_.joinable()) return;
  sync_stop_ = false;
  sync_thread_ = std::thread([this, period] {
    std::unique_lock lk(sync_mu_);
    while (!sync_stop_) {
      sync_kick_ = false;
      lk.unlock();
      drain();
      lk.lock();
      sync_cv_.wait_for(lk, period, [this] { return sync_stop_ || sync_kick_; });
    }
  });
}

void CaptureService::stop_background_sync() {
  {
    std::lock_guard lock(sync_mu_);
    sync_stop_ = true;
  }
  sync_cv_.notify_all();
  if (sync_thread_.joinable()) sync_thread_.join();
}

}  // namespace exl::capture
