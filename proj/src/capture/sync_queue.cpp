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

#include "capture/sync_queue.hpp"

#include <algorithm>

namespace exl::capture {

std::string_view entry_state_name(EntryState state) noexcept {
  switch (state) {
    case EntryState::kPending: return "pending";
    case EntryState::kAcked: return "acked";
    case EntryState::kFailed: return "failed";
  }
  return "?";
}

TimestampMs BackoffPolicy::delay_after(std::uint32_t failures) const noexcept {
  if (failures == 0) return 0;
  TimestampMs delay = base_ms;
  for (std::uint32_t i = 1; i < failures && delay < cap_ms; ++i) delay *= 2;
  return std::min(delay, cap_ms);
}

void SyncQueue::enqueue(core::DataRecord record, TimestampMs now) {
  std::lock_guard lock(mu_);
  SyncQueueEntry entry;
  entry.record = std::move(record);
  entry.next_attempt_at = now;
  entries_.push_back(std::move(entry));
}

std::size_t SyncQueue::drain(StoreClient& client, TimestampMs now) {
  std::lock_guard drain_lock(drain_mu_);
  std::size_t acked = 0;
  std::size_t cursor = 0;
  for (;;) {
    core::DataRecord record;
    std::size_t index = 0;
    {
      std::lock_guard lock(mu_);
      if (now < link_retry_at_) break;
      auto it = std::find_if(entries_.begin() + static_cast<std::ptrdiff_t>(cursor),
                             entries_.end(), [&](const SyncQueueEntry& e) {
                               return e.state == EntryState::kPending && e.next_attempt_at <= now;
                             });
      if (it == entries_.end()) break;
      index = static_cast<std::size_t>(it - entries_.begin());
      record = it->record;
    }

    DeliveryResult result = client.deliver(record);

    std::lock_guard lock(mu_);
    auto& entry = entries_[index];
    cursor = index + 1;
    switch (result.outcome) {
      case DeliveryOutcome::kAcked:
        link_failures_ = 0;
        entry.state = EntryState::kAcked;
        entry.ack = std::move(result.ack);
        entry.last_error.clear();
        ++acked;
        break;
      case DeliveryOutcome::kRejected:
      case DeliveryOutcome::kServerError:
        link_failures_ = 0;
        ++entry.attempts;
        entry.last_error = std::move(result.detail);
        if (entry.attempts >= policy_.max_attempts) {
          entry.state = EntryState::kFailed;
        } else {
          entry.next_attempt_at = now + policy_.delay_after(entry.attempts);
        }
        break;
      case DeliveryOutcome::kUnreachable:
        ++link_failures_;
        link_retry_at_ = now + policy_.delay_after(link_failures_);
        entry.last_error = std::move(result.detail);
        return acked;
    }
  }
  return acked;
}

std::size_t SyncQueue::replay_acked(StoreClient& client) {
  std::lock_guard drain_lock(drain_mu_);
  std::vector<std::pair<core::DataRecord, store::Ack>> acked;
  {
    std::lock_guard lock(mu_);
    for (const auto& e : entries_) {
      if (e.state == EntryState::kAcked && e.ack) acked.emplace_back(e.record, *e.ack);
    }
  }
  std::size_t mismatches = 0;
  for (const auto& [record, ack] : acked) {
    auto result = client.deliver(record);
    if (result.outcome != DeliveryOutcome::kAcked || !result.ack || *result.ack != ack) {
      ++mismatches;
    }
  }
  return mismatches;
}

QueueCounts SyncQueue::counts() const {
  std::lock_guard lock(mu_);
  QueueCounts c;
  for (const auto& e : entries_) {
    switch (e.state) {
      case EntryState::kPending: ++c.pending; break;
      case EntryState::kAcked: ++c.acked; break;
      case EntryState::kFailed: ++c.failed; break;
    }
  }
  return c;
}

std::vector<SyncQueueEntry> SyncQueue::entries() const {
  std::lock_guard lock(mu_);
  return {entries_.begin(), entries_.end()};
}

std::optional<TimestampMs> SyncQueue::next_due() const {
  std::lock_guard lock(mu_);
  std::optional<TimestampMs> due;
  for (const auto& e : entries_) {
    if (e.state != EntryState::kPending) continue;
    if (!due || e.next_attempt_at < *due) due = e.next_attempt_at;
  }
  if (due) due = std::max(*due, link_retry_at_);
  return due;
}

}  // namespace exl::capture
