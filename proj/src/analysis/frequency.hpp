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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "core/score_sheet.hpp"

namespace exl::analysis {

struct FrequencyRow {
  std::string_view code;
  std::string_view label;
  std::uint64_t count = 0;
  double percent = 0;  // of the grand total
};

struct FrequencyTable {
  std::uint64_t grand_total = 0;
  std::size_t event_count = 0;
  std::array<FrequencyRow, core::kScoreKeyCount> keys{};  // minors plus c, table order
  std::array<FrequencyRow, core::kMajorCount> majors{};
};

FrequencyTable frequency_table(const core::RaterScoreSheet& final_scores);

// Agreed events are copied; disagreed ones take the resolution. Throws
// kInvalidArgument naming every disagreement without a resolution.
core::RaterScoreSheet consensus_merge(
    const core::RaterScoreSheet& sheet1, const core::RaterScoreSheet& sheet2,
    const std::map<std::string, core::MovementCounts, std::less<>>& resolutions,
    std::string rater_id = "consensus");

}  // namespace exl::analysis
