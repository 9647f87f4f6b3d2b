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

#include "analysis/completeness.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace exl::analysis {

const TypeCompleteness& CompletenessAudit::type(std::string_view code) const {
  auto idx = core::slot_index(code);
  if (!idx) throw Error(ErrorCode::kNotFound, "unknown data type " + std::string(code));
  return types[*idx];
}

CompletenessAudit completeness_audit(std::span<const core::DataRecord> records) {
  if (records.empty()) throw Error(ErrorCode::kInvalidArgument, "empty audit: no records");

  CompletenessAudit audit;
  audit.record_count = records.size();
  const double n = static_cast<double>(records.size());
  for (std::size_t i = 0; i < core::kSlotCount; ++i) {
    const auto& spec = core::kSlotSpecs[i];
    auto& t = audit.types[i];
    t.code = spec.code;
    t.label = spec.label;
    t.source = spec.source;
    for (const auto& r : records) t.count += r.slots[i].has_value();
    t.percent = 100.0 * static_cast<double>(t.count) / n;
  }
  for (core::Source source : core::kAllSources) {
    const auto range = core::source_range(source);
    auto& s = audit.sources[static_cast<std::size_t>(source)];
    s.source = source;
    s.type_count = range.count;
    std::size_t total = 0;
    for (std::size_t i = range.first; i < range.first + range.count; ++i) {
      total += audit.types[i].count;
    }
    s.mean_count = static_cast<double>(total) / static_cast<double>(range.count);
    s.mean_percent = 100.0 * s.mean_count / n;
  }
  return audit;
}

FilteredRecords drop_empty_records(std::vector<core::DataRecord> records) {
  FilteredRecords out;
  out.kept.reserve(records.size());
  for (auto& r : records) {
    if (r.value_count() == 0) {
      ++out.dropped;
    } else {
      out.kept.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace exl::analysis
