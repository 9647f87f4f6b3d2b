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

#include "analysis/frequency.hpp"

#include <vector>

#include <fmt/format.h>

#include "core/error.hpp"

namespace exl::analysis {

FrequencyTable frequency_table(const core::RaterScoreSheet& final_scores) {
  FrequencyTable table;
  table.event_count = final_scores.size();
  for (std::size_t k = 0; k < core::kScoreKeyCount; ++k) {
    table.keys[k].code = core::kScoreKeys[k];
    table.keys[k].label = core::score_key_label(k);
  }
  for (std::size_t m = 0; m < core::kMajorCount; ++m) {
    table.majors[m].code = core::kMajors[m].code;
    table.majors[m].label = core::kMajors[m].label;
  }
  for (const auto& e : final_scores.entries()) {
    for (std::size_t k = 0; k < core::kScoreKeyCount; ++k) {
      table.keys[k].count += e.counts[k];
      table.majors[static_cast<std::size_t>(core::major_of_score_key(k))].count += e.counts[k];
      table.grand_total += e.counts[k];
    }
  }
  if (table.grand_total > 0) {
    const double total = static_cast<double>(table.grand_total);
    for (auto& row : table.keys) row.percent = 100.0 * static_cast<double>(row.count) / total;
    for (auto& row : table.majors) row.percent = 100.0 * static_cast<double>(row.count) / total;
  }
  return table;
}

core::RaterScoreSheet consensus_merge(
    const core::RaterScoreSheet& sheet1, const core::RaterScoreSheet& sheet2,
    const std::map<std::string, core::MovementCounts, std::less<>>& resolutions,
    std::string rater_id) {
  core::RaterScoreSheet merged(std::move(rater_id));
  std::vector<std::string> unresolved;

  auto take = [&](const std::string& event_id, const core::MovementCounts* first,
                  const core::MovementCounts* second) {
    if (first && second && *first == *second) {
      merged.add(event_id, *first);
      return;
    }
    if (auto it = resolutions.find(event_id); it != resolutions.end()) {
      merged.add(event_id, it->second);
    } else {
      unresolved.push_back(event_id);
    }
  };

  for (const auto& e : sheet1.entries()) {
    take(e.event_id, &e.counts,
         sheet2.contains(e.event_id) ? &sheet2.counts(e.event_id) : nullptr);
  }
  for (const auto& e : sheet2.entries()) {
    if (!sheet1.contains(e.event_id)) take(e.event_id, nullptr, &e.counts);
  }
  if (!unresolved.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("unresolved disagreements: {}", fmt::join(unresolved, ", ")));
  }
  return merged;
}

}  // namespace exl::analysis
