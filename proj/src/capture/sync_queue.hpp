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
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "capture/store_client.hpp"
#include "core/clock.hpp"
#include "core/model.hpp"

namespace exl::capture {

enum class EntryState { kPending, kAcked, kFailed };

std::string_view entry_state_name(EntryState state) noexcept;

struct SyncQueueEntry {
  core::DataRecord record;
  std::uint32_t attempts = 0;
  EntryState state = EntryState::kPending;
  TimestampMs next_attempt_at = 0;
  std::optional<store::Ack> ack;
  std::string last_error;
};

struct BackoffPolicy {
  TimestampMs base_ms = 500;
  TimestampMs cap_ms = 30'000;
  std::uint32_t max_attempts = 10;

  // Delay before the next try after `failures` consecutive failures (>= 1).
  TimestampMs delay_after(std::uint32_t failures) const noexcept;
};

struct QueueCounts {
  std::size_t pending = 0;
  std::size_t acked = 0;
  std::size_t failed = 0;
};

// Offline-first outbox. Entries are tried in enqueue order. A store that
// answers with a rejection or a server error costs the entry one attempt; an
// unreachable store backs off the whole link and costs no attempt.
class SyncQueue {
 public:
  explicit SyncQueue(BackoffPolicy policy = {}) : policy_(policy) {}

  void enqueue(core::DataRecord record, TimestampMs now);

  // Sends every due pending entry; returns how many were acked by this call.
  // Network calls happen outside the queue lock.
  std::size_t drain(StoreClient& client, TimestampMs now);

  // Re-sends the unchanged payload of every acked entry. Returns how many acks
  // came back different from the recorded one.
  std::size_t replay_acked(StoreClient& client);

  QueueCounts counts() const;
  std::size_t depth() const { return counts().pending; }
  std::vector<SyncQueueEntry> entries() const;
  // Earliest time at which drain() would try something; nullopt when idle.
  std::optional<TimestampMs> next_due() const;

 private:
  BackoffPolicy policy_;
  mutable std::mutex mu_;
  std::mutex drain_mu_;
  std::deque<SyncQueueEntry> entries_;
  std::uint32_t link_failures_ = 0;
  TimestampMs link_retry_at_ = 0;
};

}  // namespace exl::capture
