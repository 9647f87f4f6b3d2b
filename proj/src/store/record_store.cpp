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

#include "store/record_store.hpp"

#include "core/error.hpp"

namespace exl::store {

core::Json encode_ack(const Ack& ack) {
  core::Json j = core::Json::object();
  j["event_id"] = ack.event_id;
  j["sequence"] = ack.sequence;
  return j;
}

Ack decode_ack(const core::Json& j) {
  if (!j.is_object() || !j.contains("event_id") || !j["event_id"].is_string() ||
      !j.contains("sequence") || !j["sequence"].is_number_unsigned()) {
    throw SchemaError({"ack: expected {event_id, sequence}"});
  }
  return Ack{j["event_id"].get<std::string>(), j["sequence"].get<std::uint64_t>()};
}

core::Json encode_stored(const StoredRecord& stored) {
  core::Json j = core::Json::object();
  j["sequence"] = stored.sequence;
  j["received_at"] = stored.received_at;
  j["record"] = core::encode_record(stored.record);
  return j;
}

StoredRecord decode_stored(const core::Json& j) {
  std::vector<std::string> problems;
  if (!j.is_object()) throw SchemaError({"stored record: expected an object"});
  if (!j.contains("sequence") || !j["sequence"].is_number_unsigned())
    problems.emplace_back("sequence: expected unsigned integer");
  if (!j.contains("received_at") || !j["received_at"].is_number_integer())
    problems.emplace_back("received_at: expected integer epoch ms");
  if (!j.contains("record")) problems.emplace_back("record: missing");
  if (!problems.empty()) throw SchemaError(std::move(problems));
  StoredRecord out;
  out.sequence = j["sequence"].get<std::uint64_t>();
  out.received_at = j["received_at"].get<TimestampMs>();
  out.record = core::decode_record(j["record"]);
  return out;
}

bool RecordFilter::matches(const core::DataRecord& record) const {
  if (session_id && record.session_id != *session_id) return false;
  if (behavior_name && record.behavior_name != *behavior_name) return false;
  if (from_ms && record.clicked_at < *from_ms) return false;
  if (to_ms && record.clicked_at > *to_ms) return false;
  return true;
}

RecordStore::RecordStore(const Clock& clock, std::filesystem::path log_path)
    : clock_(clock), log_path_(std::move(log_path)) {
  if (log_path_.empty()) return;
  if (log_path_.has_parent_path()) std::filesystem::create_directories(log_path_.parent_path());
  replay_log();
  log_.open(log_path_, std::ios::binary | std::ios::app);
  if (!log_) throw Error(ErrorCode::kIo, "cannot open store log " + log_path_.string());
}

RecordStore::~RecordStore() { close(); }

void RecordStore::replay_log() {
  if (!std::filesystem::exists(log_path_)) return;
  std::string text = core::read_text_file(log_path_);
  // A torn final line from an interrupted append is dropped.
  const auto last_newline = text.rfind('\n');
  const std::size_t complete = last_newline == std::string::npos ? 0 : last_newline + 1;
  if (complete != text.size()) {
    text.resize(complete);
    std::filesystem::resize_file(log_path_, complete);
  }
  core::for_each_jsonl_text(text, log_path_.string(), [&](const core::Json& j, std::size_t) {
    StoredRecord stored = decode_stored(j);
    if (by_event_.contains(stored.record.event_id)) return;
    if (stored.sequence != records_.size() + 1) {
      throw Error(ErrorCode::kParse, "store log sequence gap at " +
                                         std::to_string(stored.sequence));
    }
    by_event_.emplace(stored.record.event_id, stored.sequence);
    records_.push_back(std::move(stored));
  });
}

Ack RecordStore::put_record(const core::DataRecord& record) {
  if (auto problems = core::validate_record_json(core::encode_record(record)); !problems.empty()) {
    throw SchemaError(std::move(problems));
  }
  std::unique_lock lock(mu_);
  if (auto it = by_event_.find(record.event_id); it != by_event_.end()) {
    return Ack{record.event_id, it->second};
  }
  StoredRecord stored{record, clock_.now_ms(), records_.size() + 1};
  if (log_.is_open()) {
    log_ << encode_stored(stored).dump() << '\n';
    log_.flush();
    if (!log_) throw Error(ErrorCode::kIo, "append to store log failed");
  }
  by_event_.emplace(record.event_id, stored.sequence);
  const Ack ack{record.event_id, stored.sequence};
  records_.push_back(std::move(stored));
  lock.unlock();
  changed_.notify_all();
  return ack;
}

Ack RecordStore::put_json(const core::Json& record_json) {
  return put_record(core::decode_record(record_json));
}

std::vector<StoredRecord> RecordStore::query(const RecordFilter& filter) const {
  std::lock_guard lock(mu_);
  std::vector<StoredRecord> out;
  for (const auto& r : records_) {
    if (filter.matches(r.record)) out.push_back(r);
  }
  return out;
}

std::vector<StoredRecord> RecordStore::since(std::uint64_t from_sequence, std::size_t limit) const {
  std::lock_guard lock(mu_);
  std::vector<StoredRecord> out;
  for (std::size_t i = from_sequence; i < records_.size() && out.size() < limit; ++i) {
    out.push_back(records_[i]);
  }
  return out;
}

bool RecordStore::wait_beyond(std::uint64_t from_sequence,
                              std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  changed_.wait_for(lock, timeout, [&] { return closed_ || records_.size() > from_sequence; });
  return records_.size() > from_sequence;
}

std::optional<Ack> RecordStore::ack_for(const std::string& event_id) const {
  std::lock_guard lock(mu_);
  if (auto it = by_event_.find(event_id); it != by_event_.end()) return Ack{event_id, it->second};
  return std::nullopt;
}

std::uint64_t RecordStore::latest_sequence() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::size_t RecordStore::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::string RecordStore::dump_text() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& r : records_) {
    out += encode_stored(r).dump();
    out += '\n';
  }
  return out;
}

void RecordStore::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  changed_.notify_all();
}

std::vector<StoredRecord> ChangeFeed::poll(std::chrono::milliseconds timeout,
                                           std::size_t max_batch) {
  if (!store_.wait_beyond(cursor_, timeout)) return {};
  auto batch = store_.since(cursor_, max_batch);
  if (!batch.empty()) cursor_ = batch.back().sequence;
  return batch;
}

}  // namespace exl::store
