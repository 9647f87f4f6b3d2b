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

#include "capture/event_log.hpp"

#include <algorithm>

#include "core/codec.hpp"
#include "core/error.hpp"

namespace exl::capture {

EventLog::EventLog(std::filesystem::path mirror_path) {
  if (mirror_path.empty()) return;
  if (mirror_path.has_parent_path()) std::filesystem::create_directories(mirror_path.parent_path());
  mirror_.open(mirror_path, std::ios::binary | std::ios::app);
  if (!mirror_) throw Error(ErrorCode::kIo, "cannot open event log " + mirror_path.string());
}

void EventLog::append(const core::DataRecord& record) {
  std::string line = core::record_line(record);
  std::lock_guard lock(mu_);
  if (mirror_.is_open()) {
    mirror_ << line << '\n';
    mirror_.flush();
    if (!mirror_) throw Error(ErrorCode::kIo, "event log write failed");
  }
  records_.push_back(record);
}

std::size_t EventLog::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::size_t EventLog::size(std::string_view session_id) const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(),
      [&](const core::DataRecord& r) { return r.session_id == session_id; }));
}

std::vector<core::DataRecord> EventLog::records(std::string_view session_id) const {
  std::vector<core::DataRecord> out;
  {
    std::lock_guard lock(mu_);
    for (const auto& r : records_) {
      if (r.session_id == session_id) out.push_back(r);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.clicked_at < b.clicked_at;
  });
  return out;
}

std::string event_log_header(std::string_view session_id) {
  core::Json header = core::Json::object();
  header["format"] = std::string(kEventLogFormat);
  header["version"] = kEventLogVersion;
  header["session_id"] = std::string(session_id);
  return header.dump();
}

std::string EventLog::export_text(std::string_view session_id) const {
  std::string text = event_log_header(session_id);
  text += '\n';
  for (const auto& r : records(session_id)) {
    text += core::record_line(r);
    text += '\n';
  }
  return text;
}

}  // namespace exl::capture
