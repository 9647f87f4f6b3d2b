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
#include <string>
#include <string_view>
#include <functional>
#include <map>
#include <vector>

#include "core/taxonomy.hpp"

namespace exl::core {

// How many times each movement was shown in one behavior, indexed like kScoreKeys.
using MovementCounts = std::array<std::uint32_t, kScoreKeyCount>;

// 0/1 per major, indexed by Major.
using MajorScores = std::array<std::uint8_t, kMajorCount>;

MajorScores major_scores(const MovementCounts& counts) noexcept;

// One rater's counts for each scored behavior event. Events keep the order in
// which they were added.
class RaterScoreSheet {
 public:
  struct Entry {
    std::string event_id;
    MovementCounts counts{};

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  RaterScoreSheet() = default;
  explicit RaterScoreSheet(std::string rater_id) : rater_id_(std::move(rater_id)) {}

  const std::string& rater_id() const noexcept { return rater_id_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  // Throws kDuplicate when the event is already scored.
  void add(std::string event_id, const MovementCounts& counts);
  // Inserts or overwrites.
  void set(const std::string& event_id, const MovementCounts& counts);

  bool contains(std::string_view event_id) const;
  // Throws kNotFound.
  const MovementCounts& counts(std::string_view event_id) const;

  friend bool operator==(const RaterScoreSheet& a, const RaterScoreSheet& b) {
    return a.rater_id_ == b.rater_id_ && a.entries_ == b.entries_;
  }

 private:
  std::string rater_id_;
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Major score is 1 iff any of its minors (or c itself) was counted at least once.
MajorScores major_from_minors(const RaterScoreSheet& sheet, std::string_view event_id);

}  // namespace exl::core
