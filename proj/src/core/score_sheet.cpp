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

#include "core/score_sheet.hpp"

#include "core/error.hpp"

namespace exl::core {

MajorScores major_scores(const MovementCounts& counts) noexcept {
  MajorScores majors{};
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] >= 1) majors[static_cast<std::size_t>(major_of_score_key(k))] = 1;
  }
  return majors;
}

void RaterScoreSheet::add(std::string event_id, const MovementCounts& counts) {
  if (index_.contains(event_id)) {
    throw Error(ErrorCode::kDuplicate,
                "event already scored by rater '" + rater_id_ + "': " + event_id);
  }
  index_.emplace(event_id, entries_.size());
  entries_.push_back(Entry{std::move(event_id), counts});
}

void RaterScoreSheet::set(const std::string& event_id, const MovementCounts& counts) {
  if (auto it = index_.find(event_id); it != index_.end()) {
    entries_[it->second].counts = counts;
    return;
  }
  add(event_id, counts);
}

bool RaterScoreSheet::contains(std::string_view event_id) const {
  return index_.find(event_id) != index_.end();
}

const MovementCounts& RaterScoreSheet::counts(std::string_view event_id) const {
  auto it = index_.find(event_id);
  if (it == index_.end()) {
    throw Error(ErrorCode::kNotFound,
                "event not in sheet '" + rater_id_ + "': " + std::string(event_id));
  }
  return entries_[it->second].counts;
}

MajorScores major_from_minors(const RaterScoreSheet& sheet, std::string_view event_id) {
  return major_scores(sheet.counts(event_id));
}

}  // namespace exl::core
