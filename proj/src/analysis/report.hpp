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

#include <optional>
#include <string>
#include <vector>

#include "analysis/alignment.hpp"
#include "analysis/completeness.hpp"
#include "analysis/contingency.hpp"
#include "analysis/frequency.hpp"
#include "analysis/kappa.hpp"
#include "core/codec.hpp"

namespace exl::analysis {

struct AlignmentComparison {
  std::string first_name;
  std::string second_name;
  TimestampMs tolerance_ms = kDefaultAlignmentToleranceMs;
  AlignmentResult first;
  AlignmentResult second;
  ContingencyTable2x2 table;
  std::optional<ChiSquareResult> chi_square;  // nullopt when the test is undefined
  std::string chi_square_error;
  OddsRatioResult odds;
};

AlignmentComparison compare_alignment(const std::string& first_name,
                                      const std::vector<CandidateEntry>& first,
                                      const std::string& second_name,
                                      const std::vector<CandidateEntry>& second,
                                      const std::vector<ReferenceEntry>& reference,
                                      TimestampMs tolerance_ms = kDefaultAlignmentToleranceMs);

core::Json to_json(const AlignmentComparison& cmp);
std::string render_text(const AlignmentComparison& cmp);

core::Json to_json(const CompletenessAudit& audit, std::size_t dropped_records);
std::string render_text(const CompletenessAudit& audit, std::size_t dropped_records);

core::Json to_json(const KappaReport& report);
std::string render_text(const KappaReport& report);

core::Json to_json(const FrequencyTable& table);
std::string render_text(const FrequencyTable& table);

// "0.95", "-0.0003" or "-" when undefined.
std::string format_kappa(const std::optional<double>& kappa);
// "< .001" below one in a thousand, otherwise three decimals.
std::string format_p(const std::optional<double>& p);

}  // namespace exl::analysis
