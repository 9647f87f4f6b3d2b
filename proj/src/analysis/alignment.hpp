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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "analysis/contingency.hpp"
#include "core/clock.hpp"

namespace exl::analysis {

inline constexpr TimestampMs kDefaultAlignmentToleranceMs = 5'000;

struct CandidateEntry {
  std::string behavior_name;
  TimestampMs at = 0;
};

struct ReferenceEntry {
  std::string behavior_name;
  TimestampMs occurred_at = 0;
};

enum class AlignmentLabel { kCorrect, kMissing, kIncorrect };

std::string_view alignment_label_name(AlignmentLabel label) noexcept;

struct CandidateVerdict {
  std::size_t candidate = 0;             // index into the candidate list
  std::optional<std::size_t> reference;  // paired reference entry
  AlignmentLabel label = AlignmentLabel::kIncorrect;
};

struct AlignmentResult {
  std::vector<CandidateVerdict> candidates;  // in candidate input order
  std::vector<std::size_t> missing;          // unpaired reference indices
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  std::size_t reference_count = 0;

  std::size_t missing_count() const noexcept { return missing.size(); }
  // Share of reference entries matched correctly, in percent.
  double correct_percent() const noexcept;
};

// Candidates are visited in time order. Each first takes the nearest unpaired
// reference entry with the same name inside the tolerance; candidates left
// over then take the nearest unpaired entry of any name, which makes them
// incorrect. Reference entries must be sorted by time.
AlignmentResult align(const std::vector<CandidateEntry>& candidates,
                      const std::vector<ReferenceEntry>& reference,
                      TimestampMs tolerance_ms = kDefaultAlignmentToleranceMs);

// (correct, missing + incorrect) for each method.
ContingencyTable2x2 contingency_from_alignment(const AlignmentResult& first,
                                               const AlignmentResult& second);

// Line-delimited inputs. Reference lines: {behavior_name, occurred_at}.
// Candidate lines: {behavior_name, at} or an exported record (clicked_at).
std::vector<ReferenceEntry> read_reference(const std::filesystem::path& path);
std::vector<CandidateEntry> read_candidates(const std::filesystem::path& path);

}  // namespace exl::analysis
