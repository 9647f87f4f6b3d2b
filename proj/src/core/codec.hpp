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

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "core/model.hpp"
#include "core/registry.hpp"
#include "core/score_sheet.hpp"

namespace exl::core {

// Field order in every emitted object is fixed, so encodings are byte-stable.
using Json = nlohmann::ordered_json;

Json encode_slot(const Slot& slot);
Json encode_record(const DataRecord& record);
std::string record_line(const DataRecord& record);

// Returns one diagnostic per offending field; empty means valid.
std::vector<std::string> validate_record_json(const Json& j);
// Throws SchemaError.
DataRecord decode_record(const Json& j);

Json encode_definition(const BehaviorDefinition& def);
BehaviorDefinition decode_definition(const Json& j);
Json encode_registry(const BehaviorRegistry& registry);
std::vector<BehaviorDefinition> decode_definitions(const Json& j);

Json encode_score_entry(std::string_view rater_id, const RaterScoreSheet::Entry& entry);
std::string score_sheet_text(const RaterScoreSheet& sheet);

// Calls fn for each non-blank line parsed as JSON. Parse failures raise
// Error(kParse) naming the file and 1-based line number.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const Json&, std::size_t line)>& fn);
void for_each_jsonl_text(std::string_view text, std::string_view origin,
                         const std::function<void(const Json&, std::size_t line)>& fn);

// Reads DataRecords from an event-log export, a store dump, or a bare record
// stream. Header lines are skipped; store lines are unwrapped.
std::vector<DataRecord> read_records(const std::filesystem::path& path);

RaterScoreSheet read_score_sheet(const std::filesystem::path& path);
// Resolution lines share the score-sheet shape; rater_id is ignored.
std::vector<RaterScoreSheet::Entry> read_score_entries(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace exl::core
