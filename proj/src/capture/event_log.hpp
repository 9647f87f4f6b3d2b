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

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "core/model.hpp"

namespace exl::capture {

inline constexpr std::string_view kEventLogFormat = "expresslog-events";
inline constexpr int kEventLogVersion = 1;

// Append-only record log. When a path is given every appended record is also
// written through to that file as one line.
class EventLog {
 public:
  explicit EventLog(std::filesystem::path mirror_path = {});

  void append(const core::DataRecord& record);

  std::size_t size() const;
  std::size_t size(std::string_view session_id) const;
  std::vector<core::DataRecord> records(std::string_view session_id) const;

  // Header line followed by the session's records in clicked_at order.
  std::string export_text(std::string_view session_id) const;

 private:
  mutable std::mutex mu_;
  std::vector<core::DataRecord> records_;
  std::ofstream mirror_;
};

std::string event_log_header(std::string_view session_id);

}  // namespace exl::capture
