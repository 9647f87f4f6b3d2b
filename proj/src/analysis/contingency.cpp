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

#include "analysis/contingency.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "analysis/distributions.hpp"
#include "core/error.hpp"

namespace exl::analysis {

ChiSquareResult chi_square_2x2(const ContingencyTable2x2& t, bool yates) {
  const double a = static_cast<double>(t.a), b = static_cast<double>(t.b);
  const double c = static_cast<double>(t.c), d = static_cast<double>(t.d);
  const double r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
  if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) {
    throw Error(ErrorCode::kUndefined, "chi-square test undefined: a row or column total is zero");
  }
  const double n = r1 + r2;
  const std::array<double, 4> observed = {a, b, c, d};
  const std::array<double, 4> expected = {r1 * c1 / n, r1 * c2 / n, r2 * c1 / n, r2 * c2 / n};

  ChiSquareResult res;
  res.yates = yates;
  for (std::size_t i = 0; i < 4; ++i) {
    double diff = std::abs(observed[i] - expected[i]);
    if (yates) diff = std::max(0.0, diff - 0.5);
    res.chi2 += diff * diff / expected[i];
  }
  res.p_value = chi_square_sf(res.chi2, res.df);
  return res;
}

OddsRatioResult odds_ratio(const ContingencyTable2x2& t) {
  OddsRatioResult res;
  double a = static_cast<double>(t.a), b = static_cast<double>(t.b);
  double c = static_cast<double>(t.c), d = static_cast<double>(t.d);
  if (t.a == 0 || t.b == 0 || t.c == 0 || t.d == 0) {
    a += 0.5;
    b += 0.5;
    c += 0.5;
    d += 0.5;
    res.haldane_corrected = true;
  }
  res.or_correct = (a * d) / (b * c);
  res.or_missing_incorrect = (b * c) / (a * d);
  return res;
}

}  // namespace exl::analysis
