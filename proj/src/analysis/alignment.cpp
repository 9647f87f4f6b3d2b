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

#include "analysis/alignment.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include <fmt/format.h>

#include "core/codec.hpp"
#include "core/error.hpp"

namespace exl::analysis {

std::string_view alignment_label_name(AlignmentLabel label) noexcept {
  switch (label) {
    case AlignmentLabel::kCorrect: return "correct";
    case AlignmentLabel::kMissing: return "missing";
    case AlignmentLabel::kIncorrect: return "incorrect";
  }
  return "?";
}

double AlignmentResult::correct_percent() const noexcept {
  if (reference_count == 0) return 0;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(reference_count);
}

AlignmentResult align(const std::vector<CandidateEntry>& candidates,
                      const std::vector<ReferenceEntry>& reference, TimestampMs tolerance_ms) {
  if (tolerance_ms <= 0) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  for (std::size_t i = 1; i < reference.size(); ++i) {
    if (reference[i].occurred_at < reference[i - 1].occurred_at) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("reference entries not sorted at index {}", i));
    }
  }

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return candidates[x].at < candidates[y].at;
  });

  std::vector<std::optional<std::size_t>> pair(candidates.size());
  std::vector<bool> used(reference.size(), false);

  auto nearest = [&](const CandidateEntry& cand, bool same_name) -> std::optional<std::size_t> {
    auto lo = std::lower_bound(reference.begin(), reference.end(), cand.at - tolerance_ms,
                               [](const ReferenceEntry& r, TimestampMs t) {
                                 return r.occurred_at < t;
                               });
    std::optional<std::size_t> best;
    TimestampMs best_gap = 0;
    for (auto it = lo; it != reference.end() && it->occurred_at <= cand.at + tolerance_ms; ++it) {
      const auto j = static_cast<std::size_t>(it - reference.begin());
      if (used[j]) continue;
      if (same_name && it->behavior_name != cand.behavior_name) continue;
      const TimestampMs gap = std::llabs(it->occurred_at - cand.at);
      if (!best || gap < best_gap) {
        best = j;
        best_gap = gap;
      }
    }
    return best;
  };

  for (bool same_name : {true, false}) {
    for (std::size_t i : order) {
      if (pair[i]) continue;
      if (auto j = nearest(candidates[i], same_name)) {
        pair[i] = *j;
        used[*j] = true;
      }
    }
  }

  AlignmentResult res;
  res.reference_count = reference.size();
  res.candidates.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    CandidateVerdict v;
    v.candidate = i;
    v.reference = pair[i];
    const bool ok = pair[i] && reference[*pair[i]].behavior_name == candidates[i].behavior_name;
    v.label = ok ? AlignmentLabel::kCorrect : AlignmentLabel::kIncorrect;
    ++(ok ? res.correct : res.incorrect);
    res.candidates.push_back(v);
  }
  for (std::size_t j = 0; j < reference.size(); ++j) {
    if (!used[j]) res.missing.push_back(j);
  }
  return res;
}

ContingencyTable2x2 contingency_from_alignment(const AlignmentResult& first,
                                               const AlignmentResult& second) {
  return {first.correct, first.missing_count() + first.incorrect, second.correct,
          second.missing_count() + second.incorrect};
}

namespace {

std::string required_name(const core::Json& j) {
  auto it = j.find("behavior_name");
  if (it == j.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw Error(ErrorCode::kParse, "behavior_name missing or not a string");
  }
  return it->get<std::string>();
}

TimestampMs required_time(const core::Json& j, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    auto it = j.find(key);
    if (it != j.end()) {
      if (!it->is_number_integer()) throw Error(ErrorCode::kParse, fmt::format("{} must be an integer", key));
      return it->get<TimestampMs>();
    }
  }
  throw Error(ErrorCode::kParse, fmt::format("missing timestamp ({})", fmt::join(keys, " or ")));
}

bool is_header(const core::Json& j) { return j.contains("format"); }

}  // namespace

std::vector<ReferenceEntry> read_reference(const std::filesystem::path& path) {
  std::vector<ReferenceEntry> out;
  core::for_each_jsonl(path, [&](const core::Json& j, std::size_t) {
    if (is_header(j)) return;
    out.push_back({required_name(j), required_time(j, {"occurred_at"})});
  });
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.occurred_at < b.occurred_at;
  });
  return out;
}

std::vector<CandidateEntry> read_candidates(const std::filesystem::path& path) {
  std::vector<CandidateEntry> out;
  core::for_each_jsonl(path, [&](const core::Json& j, std::size_t) {
    if (is_header(j)) return;
    const core::Json& body = j.contains("record") ? j.at("record") : j;
    out.push_back({required_name(body), required_time(body, {"at", "clicked_at"})});
  });
  return out;
}

}  // namespace exl::analysis
