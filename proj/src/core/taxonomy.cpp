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

#include "core/taxonomy.hpp"

namespace exl::core {

std::optional<std::size_t> score_key_index(std::string_view key) noexcept {
  for (std::size_t i = 0; i < kScoreKeys.size(); ++i) {
    if (kScoreKeys[i] == key) return i;
  }
  return std::nullopt;
}

Major major_of_score_key(std::size_t key_index) noexcept {
  // The leading letter of the key names its major.
  return static_cast<Major>(kScoreKeys[key_index][0] - 'a');
}

const MajorCategory& major_category(Major major) noexcept {
  return kMajors[static_cast<std::size_t>(major)];
}

std::string_view score_key_label(std::size_t key_index) noexcept {
  if (key_index == kVocalizationKey) return major_category(Major::kVocalization).label;
  const auto key = kScoreKeys[key_index];
  for (const auto& minor : kMinors) {
    if (minor.code == key) return minor.label;
  }
  return key;
}

}  // namespace exl::core
