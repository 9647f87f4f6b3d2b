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

#include "analysis/kappa.hpp"

#include <cmath>

#include <fmt/format.h>

#include "analysis/distributions.hpp"
#include "core/error.hpp"
#include "core/taxonomy.hpp"

namespace exl::analysis {

KappaResult cohen_kappa(std::span<const std::uint8_t> scores1,
                        std::span<const std::uint8_t> scores2) {
  if (scores1.size() != scores2.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("rater score vectors differ in length: {} vs {}", scores1.size(),
                            scores2.size()));
  }
  if (scores1.empty()) throw Error(ErrorCode::kInvalidArgument, "rater score vectors are empty");

  KappaResult res;
  res.n = scores1.size();
  for (std::size_t i = 0; i < res.n; ++i) {
    if (scores1[i] > 1 || scores2[i] > 1) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("score at index {} is not 0 or 1", i));
    }
    ++res.table[scores1[i]][scores2[i]];
  }

  // Integer form keeps the hand cases exact:
  // kappa = (n*agree - sum row*col) / (n^2 - sum row*col)
  const auto& t = res.table;
  const std::uint64_t n = res.n;
  const std::uint64_t agree = t[0][0] + t[1][1];
  const std::uint64_t row1 = t[1][0] + t[1][1], row0 = n - row1;
  const std::uint64_t col1 = t[0][1] + t[1][1], col0 = n - col1;
  const std::uint64_t chance = row1 * col1 + row0 * col0;
  const double nn = static_cast<double>(n) * static_cast<double>(n);

  res.observed_agreement = static_cast<double>(agree) / static_cast<double>(n);
  res.expected_agreement = static_cast<double>(chance) / nn;

  const bool rater1_constant = row1 == 0 || row0 == 0;
  const bool rater2_constant = col1 == 0 || col0 == 0;
  if (chance == n * n || (rater1_constant && rater2_constant)) return res;

  res.kappa = static_cast<double>(static_cast<std::int64_t>(n * agree) -
                                  static_cast<std::int64_t>(chance)) /
              static_cast<double>(n * n - chance);

  // Standard error under the null hypothesis (Fleiss, Cohen and Everitt).
  const double pe = res.expected_agreement;
  const double p1[2] = {static_cast<double>(row0) / n, static_cast<double>(row1) / n};
  const double p2[2] = {static_cast<double>(col0) / n, static_cast<double>(col1) / n};
  double cross = 0;
  for (int k = 0; k < 2; ++k) cross += p1[k] * p2[k] * (p1[k] + p2[k]);
  const double var = pe + pe * pe - cross;
  if (var > 0) {
    const double se0 = std::sqrt(var) / ((1 - pe) * std::sqrt(static_cast<double>(n)));
    res.p_value = std::min(1.0, 2 * normal_sf(std::abs(*res.kappa) / se0));
  }
  return res;
}

std::string_view kappa_bucket_name(KappaBucket bucket) noexcept {
  switch (bucket) {
    case KappaBucket::kLessThanChance: return "less-than-chance";
    case KappaBucket::kSlight: return "slight";
    case KappaBucket::kFair: return "fair";
    case KappaBucket::kModerate: return "moderate";
    case KappaBucket::kSubstantial: return "substantial";
    case KappaBucket::kAlmostPerfect: return "almost-perfect";
    case KappaBucket::kUndefined: return "undefined";
  }
  return "undefined";
}

int kappa_bucket_rank(KappaBucket bucket) noexcept {
  switch (bucket) {
    case KappaBucket::kLessThanChance: return 0;
    case KappaBucket::kSlight: return 1;
    case KappaBucket::kFair: return 2;
    case KappaBucket::kModerate: return 3;
    case KappaBucket::kSubstantial: return 4;
    case KappaBucket::kAlmostPerfect: return 5;
    case KappaBucket::kUndefined: return -1;
  }
  return -1;
}

KappaBucket kappa_bucket(double kappa) {
  if (!(kappa >= -1.0 && kappa <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("kappa {} outside [-1, 1]", kappa));
  }
  if (kappa <= 0) return KappaBucket::kLessThanChance;
  if (kappa <= 0.20) return KappaBucket::kSlight;
  if (kappa <= 0.40) return KappaBucket::kFair;
  if (kappa <= 0.60) return KappaBucket::kModerate;
  if (kappa <= 0.80) return KappaBucket::kSubstantial;
  return KappaBucket::kAlmostPerfect;
}

KappaBucket kappa_bucket(const std::optional<double>& kappa) {
  return kappa ? kappa_bucket(*kappa) : KappaBucket::kUndefined;
}

namespace {

KappaRow make_row(std::string code, std::string label, bool major,
                  const std::vector<std::uint8_t>& s1, const std::vector<std::uint8_t>& s2) {
  KappaRow row;
  row.code = std::move(code);
  row.label = std::move(label);
  row.major = major;
  row.result = cohen_kappa(s1, s2);
  row.bucket = kappa_bucket(row.result.kappa);
  return row;
}

}  // namespace

KappaReport kappa_report(const core::RaterScoreSheet& sheet1,
                         const core::RaterScoreSheet& sheet2) {
  std::vector<std::string> missing;
  for (const auto& e : sheet1.entries()) {
    if (!sheet2.contains(e.event_id)) missing.push_back(e.event_id);
  }
  for (const auto& e : sheet2.entries()) {
    if (!sheet1.contains(e.event_id)) missing.push_back(e.event_id);
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("score sheets cover different events: {}", fmt::join(missing, ", ")));
  }

  const std::size_t n = sheet1.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "score sheets are empty");
  std::array<std::vector<std::uint8_t>, core::kScoreKeyCount> key1, key2;
  std::array<std::vector<std::uint8_t>, core::kMajorCount> major1, major2;
  for (const auto& e : sheet1.entries()) {
    const auto& c1 = e.counts;
    const auto& c2 = sheet2.counts(e.event_id);
    for (std::size_t k = 0; k < core::kScoreKeyCount; ++k) {
      key1[k].push_back(c1[k] > 0);
      key2[k].push_back(c2[k] > 0);
    }
    const auto m1 = core::major_scores(c1), m2 = core::major_scores(c2);
    for (std::size_t m = 0; m < core::kMajorCount; ++m) {
      major1[m].push_back(m1[m]);
      major2[m].push_back(m2[m]);
    }
  }

  KappaReport report;
  report.event_count = n;
  for (const auto& major : core::kMajors) {
    const auto m = static_cast<std::size_t>(major.major);
    report.rows.push_back(make_row(std::string(major.code), std::string(major.label), true,
                                   major1[m], major2[m]));
    for (std::size_t k = 0; k < core::kScoreKeyCount; ++k) {
      if (k == core::kVocalizationKey || core::major_of_score_key(k) != major.major) continue;
      report.rows.push_back(make_row(std::string(core::kScoreKeys[k]),
                                     std::string(core::score_key_label(k)), false, key1[k],
                                     key2[k]));
    }
  }
  return report;
}

}  // namespace exl::analysis
