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
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/clock.hpp"
#include "core/codec.hpp"
#include "core/model.hpp"

namespace exl::store {

struct Ack {
  std::string event_id;
  std::uint64_t sequence = 0;

  friend bool operator==(const Ack&, const Ack&) = default;
};

struct StoredRecord {
  core::DataRecord record;
  TimestampMs received_at = 0;
  std::uint64_t sequence = 0;
};

core::Json encode_ack(const Ack& ack);
Ack decode_ack(const core::Json& j);
// Persistence and wire line: {"sequence", "received_at", "record"}.
core::Json encode_stored(const StoredRecord& stored);
StoredRecord decode_stored(const core::Json& j);

struct RecordFilter {
  std::optional<std::string> session_id;
  std::optional<std::string> behavior_name;
  std::optional<TimestampMs> from_ms;  // inclusive, on clicked_at
  std::optional<TimestampMs> to_ms;    // inclusive

  bool matches(const core::DataRecord& record) const;
};

// Deduplicating record store. Writes go through one sequencer; sequences start
// at 1 and increase in arrival order. With a log path every accepted record is
// appended to that file and the file is replayed on open.
class RecordStore {
 public:
  explicit RecordStore(const Clock& clock, std::filesystem::path log_path = {});
  ~RecordStore();

  RecordStore(const RecordStore&) = delete;
  RecordStore& operator=(const RecordStore&) = delete;

  // A repeated event_id returns the original ack and stores nothing.
  Ack put_record(const core::DataRecord& record);
  // Schema-checks first; throws SchemaError naming each bad field.
  Ack put_json(const core::Json& record_json);

  std::vector<StoredRecord> query(const RecordFilter& filter = {}) const;
  std::vector<StoredRecord> since(std::uint64_t from_sequence,
                                  std::size_t limit = std::numeric_limits<std::size_t>::max()) const;
  // Waits until some record has sequence > from_sequence, the timeout passes, or
  // the store is closed. Returns whether such a record exists.
  bool wait_beyond(std::uint64_t from_sequence, std::chrono::milliseconds timeout) const;

  std::optional<Ack> ack_for(const std::string& event_id) const;
  std::uint64_t latest_sequence() const;
  std::size_t size() const;
  std::string dump_text() const;
  const std::filesystem::path& log_path() const noexcept { return log_path_; }

  // Wakes every waiter; later waits return immediately.
  void close();

 private:
  void replay_log();

  const Clock& clock_;
  std::filesystem::path log_path_;
  std::ofstream log_;
  mutable std::mutex mu_;
  mutable std::condition_variable changed_;
  std::vector<StoredRecord> records_;  // index = sequence - 1
  std::map<std::string, std::uint64_t, std::less<>> by_event_;
  bool closed_ = false;
};

// Cursor over the store's sequence. Delivery is at-least-once; callers dedup by
// sequence.
class ChangeFeed {
 public:
  ChangeFeed(const RecordStore& store, std::uint64_t from_sequence)
      : store_(store), cursor_(from_sequence) {}

  // Returns records beyond the cursor, waiting up to `timeout` when none are
  // available yet, and advances the cursor past them.
  std::vector<StoredRecord> poll(std::chrono::milliseconds timeout,
                                 std::size_t max_batch = 1000);
  std::uint64_t cursor() const noexcept { return cursor_; }

 private:
  const RecordStore& store_;
  std::uint64_t cursor_;
};

}  // namespace exl::store
