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

namespace exl::analysis {

// Rows are methods, columns are correct vs missing-or-incorrect.
struct ContingencyTable2x2 {
  std::uint64_t a = 0;  // row 1, correct
  std::uint64_t b = 0;  // row 1, missing or incorrect
  std::uint64_t c = 0;  // row 2, correct
  std::uint64_t d = 0;  // row 2, missing or incorrect

  std::uint64_t total() const noexcept { return a + b + c + d; }
  friend bool operator==(const ContingencyTable2x2&, const ContingencyTable2x2&) = default;
};

struct ChiSquareResult {
  double chi2 = 0;
  int df = 1;
  double p_value = 1;
  bool yates = false;
};

// Pearson statistic; Yates' continuity correction only when asked for.
// Throws kUndefined when a row or column total is zero.
ChiSquareResult chi_square_2x2(const ContingencyTable2x2& t, bool yates = false);

struct OddsRatioResult {
  double or_correct = 0;
  double or_missing_incorrect = 0;
  bool haldane_corrected = false;  // +0.5 added to every cell
};

OddsRatioResult odds_ratio(const ContingencyTable2x2& t);

}  // namespace exl::analysis
