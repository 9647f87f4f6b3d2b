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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace exl::core {

// Major categories of the expression taxonomy, a through f.
enum class Major : std::uint8_t { kEye = 0, kFacial, kVocalization, kHand, kBody, kOthers };

inline constexpr std::size_t kMajorCount = 6;
inline constexpr std::size_t kMinorCount = 16;
// Scoring keys are the 16 minors plus vocalization, which is scored directly.
inline constexpr std::size_t kScoreKeyCount = kMinorCount + 1;

struct MajorCategory {
  std::string_view code;
  std::string_view label;
  Major major;
};

struct MinorCategory {
  std::string_view code;
  std::string_view label;
  Major major;
  std::string_view criterion;
};

inline constexpr std::array<MajorCategory, kMajorCount> kMajors = {{
    {"a", "Eye movement", Major::kEye},
    {"b", "Facial expression", Major::kFacial},
    {"c", "Vocalization", Major::kVocalization},
    {"d", "Hand movement", Major::kHand},
    {"e", "Body movement", Major::kBody},
    {"f", "Non-communicative behaviors (others)", Major::kOthers},
}};

inline constexpr std::array<MinorCategory, kMinorCount> kMinors = {{
    {"a.1", "Gazing", Major::kEye,
     "Gaze at people and things (in the case of interpersonal people, look at their faces)"},
    {"a.2", "Eye tracking", Major::kEye,
     "Eye movements that follow the movements of people and things in a linear fashion"},
    {"a.3", "Changing line of sight", Major::kEye,
     "Change of line of sight, movement of line of sight; gaze rolls and moves; point-like "
     "movement that is not \"a.2. eye tracking.\" The momentary glare can also be evaluated. "
     "Movements that cannot be evaluated as gaze/tracking."},
    {"a.4", "Opening or closing the eyelids", Major::kEye,
     "Not an involuntary blink. Their reaction when told to open or close their eyes."},
    {"b.1", "Smiling", Major::kFacial, "Smile"},
    {"b.2", "Facial expression (other than smile)", Major::kFacial,
     "Something that is not expressionless. Changes in facial expressions. Surprise, frowning, "
     "sticking out tongue, etc."},
    {"b.3", "Concentrating and listening", Major::kFacial,
     "Focusing on picture books, music, and voices etc."},
    {"d.1", "Pointing", Major::kHand, "Hand pointing or pointing finger towards an object."},
    {"d.2", "Reaching", Major::kHand,
     "The action of reaching or chasing after reaching the target, not by pointing hand or "
     "finger."},
    {"d.3", "Moving", Major::kHand, "Grab, hit, beckon, push, raise hands, dispel, etc."},
    {"e.1", "Approaching", Major::kBody,
     "Head or upper body (or the whole body) is brought close to a person or an object."},
    {"e.2", "Contacting", Major::kBody,
     "Touching people and things with hands and body. It does not include cases that are "
     "touched by accident or touched."},
    {"e.3", "Movement of a part of the body", Major::kBody,
     "Head and neck movements, upper body movements, upper and lower limb movements (shake, "
     "bend, move mouth, flutter legs, etc.); (excluding \"d.1. pointing\", \"d.2. reaching\", "
     "\"d.3. moving\"), etc. Distinguish from \"f.1. stereotyped behavior\""},
    {"f.1", "Stereotypical behavior", Major::kOthers,
     "The same behavior or movement are repeated without purpose. Behavior that occurs in a "
     "certain repetition e.g. Finger sucking, shaking hands, rocking, etc. (Shaking things is "
     "\"d.3. moving\")"},
    {"f.2", "Self- and others-injurious behavior", Major::kOthers,
     "Hitting someone, biting finger, etc."},
    {"f.3", "Others", Major::kOthers, "Difficult to classify other than the above categories"},
}};

inline constexpr std::string_view kVocalizationCriterion = "Producing sound";

// Score keys in table order: a.1-a.4, b.1-b.3, c, d.1-d.3, e.1-e.3, f.1-f.3.
inline constexpr std::array<std::string_view, kScoreKeyCount> kScoreKeys = {
    "a.1", "a.2", "a.3", "a.4", "b.1", "b.2", "b.3", "c", "d.1",
    "d.2", "d.3", "e.1", "e.2", "e.3", "f.1", "f.2", "f.3"};

inline constexpr std::size_t kVocalizationKey = 7;

std::optional<std::size_t> score_key_index(std::string_view key) noexcept;
Major major_of_score_key(std::size_t key_index) noexcept;
const MajorCategory& major_category(Major major) noexcept;
std::string_view score_key_label(std::size_t key_index) noexcept;

}  // namespace exl::core
