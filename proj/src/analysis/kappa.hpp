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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/score_sheet.hpp"

namespace exl::analysis {

struct KappaResult {
  std::optional<double> kappa;    // nullopt when undefined
  std::optional<double> p_value;  // two-sided, normal approximation under kappa = 0
  double observed_agreement = 0;
  double expected_agreement = 0;
  std::size_t n = 0;
  // 2x2 agreement counts: [rater1][rater2]
  std::array<std::array<std::size_t, 2>, 2> table{};
};

// Scores must be 0 or 1 and the vectors equally long (>= 1).
// Undefined when expected agreement is 1 or both raters are constant.
KappaResult cohen_kappa(std::span<const std::uint8_t> scores1,
                        std::span<const std::uint8_t> scores2);

enum class KappaBucket {
  kLessThanChance,
  kSlight,
  kFair,
  kModerate,
  kSubstantial,
  kAlmostPerfect,
  kUndefined,
};

std::string_view kappa_bucket_name(KappaBucket bucket) noexcept;
// 1-based rank as printed in agreement tables; 0 for less than chance.
int kappa_bucket_rank(KappaBucket bucket) noexcept;

// Throws kInvalidArgument outside [-1, 1].
KappaBucket kappa_bucket(double kappa);
KappaBucket kappa_bucket(const std::optional<double>& kappa);

struct KappaRow {
  std::string code;   // "a", "a.1", ...
  std::string label;
  bool major = false;
  KappaResult result;
  KappaBucket bucket = KappaBucket::kUndefined;
};

struct KappaReport {
  std::size_t event_count = 0;
  std::vector<KappaRow> rows;  // majors interleaved with their minors, table order
};

// Per major and minor category agreement on presence (count >= 1). Both sheets
// must score the same events.
KappaReport kappa_report(const core::RaterScoreSheet& sheet1, const core::RaterScoreSheet& sheet2);

}  // namespace exl::analysis
