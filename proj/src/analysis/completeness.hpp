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
#include <span>
#include <string_view>
#include <vector>

#include "core/model.hpp"

namespace exl::analysis {

struct TypeCompleteness {
  std::string_view code;
  std::string_view label;
  core::Source source = core::Source::kBeacon;
  std::size_t count = 0;  // records with a value in this slot
  double percent = 0;
};

struct SourceCompleteness {
  core::Source source = core::Source::kBeacon;
  std::size_t type_count = 0;
  double mean_count = 0;  // arithmetic mean of the per-type counts
  double mean_percent = 0;
};

struct CompletenessAudit {
  std::size_t record_count = 0;
  std::array<TypeCompleteness, core::kSlotCount> types{};
  std::array<SourceCompleteness, 4> sources{};

  const TypeCompleteness& type(std::string_view code) const;
  const SourceCompleteness& source(core::Source source) const noexcept {
    return sources[static_cast<std::size_t>(source)];
  }
};

// Throws kInvalidArgument on an empty input.
CompletenessAudit completeness_audit(std::span<const core::DataRecord> records);

struct FilteredRecords {
  std::vector<core::DataRecord> kept;
  std::size_t dropped = 0;  // records where every slot was an error
};

FilteredRecords drop_empty_records(std::vector<core::DataRecord> records);

}  // namespace exl::analysis
