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
#include <map>
#include <string>
#include <vector>

#include "analysis/alignment.hpp"
#include "core/model.hpp"
#include "core/score_sheet.hpp"

namespace exl::sim {

inline constexpr std::uint64_t kFixtureSeed = 20'230'520;

// Reference log plus two candidate logs whose labels come out as
// app: 269 correct / 20 missing / 12 incorrect and
// manual: 195 correct / 60 missing / 46 incorrect over 301 reference entries.
struct AlignmentFixture {
  std::vector<analysis::ReferenceEntry> reference;
  std::vector<analysis::CandidateEntry> app;
  std::vector<analysis::CandidateEntry> manual;
};

AlignmentFixture make_alignment_fixture(std::uint64_t seed = kFixtureSeed);

// Per data type, how many of the 327 audited records carry a value; followed
// by the number of extra records with no data at all.
struct CompletenessShape {
  std::size_t records = 327;
  std::size_t empty_records = 37;
  std::array<std::size_t, core::kSlotCount> present{};
};

CompletenessShape reference_completeness_shape();

// Records matching the shape exactly, empty records last.
std::vector<core::DataRecord> make_completeness_records(std::uint64_t seed = kFixtureSeed);

// Consensus counts whose per-category totals match the reference frequency
// column, two rater sheets that disagree on some events, and resolutions for
// exactly those events.
struct ScoreFixture {
  core::RaterScoreSheet consensus;
  core::RaterScoreSheet rater1;
  core::RaterScoreSheet rater2;
  std::map<std::string, core::MovementCounts, std::less<>> resolutions;
};

inline constexpr std::size_t kScoredEvents = 291;
// Movement totals in score-key order (a.1 .. f.3, c included).
inline constexpr core::MovementCounts kReferenceMovementTotals = {
    38, 13, 46, 7, 36, 24, 1, 146, 29, 25, 100, 16, 35, 136, 16, 2, 6};

ScoreFixture make_score_fixture(std::uint64_t seed = kFixtureSeed);

std::string weather_fixture_payload();

struct FixtureFile {
  std::filesystem::path relative;  // under the data directory
  std::string content;
};

// Every bundled fixture, scenario and weather payload, byte-stable for a seed.
std::vector<FixtureFile> generate_fixtures(std::uint64_t seed = kFixtureSeed);
void write_fixtures(const std::filesystem::path& data_dir, std::uint64_t seed = kFixtureSeed);

}  // namespace exl::sim
