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

#include "core/codec.hpp"

#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace exl::core {

namespace {

const char* kMetadataKeys[] = {"event_id", "session_id", "behavior_name", "category_name",
                               "clicked_at"};

std::string location(std::string_view origin, std::size_t line) {
  return std::string(origin) + ":" + std::to_string(line);
}

}  // namespace

Json encode_slot(const Slot& slot) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SlotError>) {
          Json err = Json::object();
          err["error"] = std::string(slot_error_name(v));
          return err;
        } else {
          return Json(v);
        }
      },
      slot.content());
}

Json encode_record(const DataRecord& record) {
  Json j = Json::object();
  j["event_id"] = record.event_id;
  j["session_id"] = record.session_id;
  j["behavior_name"] = record.behavior_name;
  j["category_name"] = record.category_name;
  j["clicked_at"] = record.clicked_at;
  for (std::size_t i = 0; i < kSlotCount; ++i) {
    j[std::string(kSlotSpecs[i].code)] = encode_slot(record.slots[i]);
  }
  return j;
}

std::string record_line(const DataRecord& record) { return encode_record(record).dump(); }

std::vector<std::string> validate_record_json(const Json& j) {
  std::vector<std::string> problems;
  if (!j.is_object()) {
    problems.emplace_back("record: expected an object");
    return problems;
  }
  for (const char* key : kMetadataKeys) {
    auto it = j.find(key);
    if (it == j.end()) {
      problems.push_back(std::string(key) + ": missing");
      continue;
    }
    if (std::string_view(key) == "clicked_at") {
      if (!it->is_number_integer()) problems.push_back("clicked_at: expected integer epoch ms");
    } else if (!it->is_string()) {
      problems.push_back(std::string(key) + ": expected string");
    } else if (std::string_view(key) != "session_id" && it->get_ref<const std::string&>().empty()) {
      problems.push_back(std::string(key) + ": must not be empty");
    }
  }
  for (const auto& spec : kSlotSpecs) {
    const std::string code(spec.code);
    auto it = j.find(code);
    if (it == j.end()) {
      problems.push_back(code + ": missing slot");
      continue;
    }
    if (it->is_number() || it->is_string()) continue;
    if (it->is_object()) {
      auto err = it->find("error");
      if (err != it->end() && err->is_string() &&
          parse_slot_error(err->get_ref<const std::string&>())) {
        continue;
      }
    }
    problems.push_back(code + ": expected a value or an error marker");
  }
  return problems;
}

DataRecord decode_record(const Json& j) {
  if (auto problems = validate_record_json(j); !problems.empty()) {
    throw SchemaError(std::move(problems));
  }
  DataRecord record;
  record.event_id = j["event_id"].get<std::string>();
  record.session_id = j["session_id"].get<std::string>();
  record.behavior_name = j["behavior_name"].get<std::string>();
  record.category_name = j["category_name"].get<std::string>();
  record.clicked_at = j["clicked_at"].get<TimestampMs>();
  for (std::size_t i = 0; i < kSlotCount; ++i) {
    const Json& v = j[std::string(kSlotSpecs[i].code)];
    if (v.is_number_integer()) {
      record.slots[i] = Slot::integer(v.get<std::int64_t>());
    } else if (v.is_number()) {
      record.slots[i] = Slot::real(v.get<double>());
    } else if (v.is_string()) {
      record.slots[i] = Slot::text(v.get<std::string>());
    } else {
      record.slots[i] = Slot::error(*parse_slot_error(v["error"].get<std::string>()));
    }
  }
  return record;
}

Json encode_definition(const BehaviorDefinition& def) {
  Json j = Json::object();
  j["category_code"] = def.category_code;
  j["behavior_name"] = def.behavior_name;
  j["category_name"] = def.category_name;
  return j;
}

BehaviorDefinition decode_definition(const Json& j) {
  std::vector<std::string> problems;
  if (!j.is_object()) throw SchemaError({"definition: expected an object"});
  BehaviorDefinition def;
  if (auto it = j.find("category_code"); it != j.end() && it->is_number_integer()) {
    def.category_code = it->get<std::int64_t>();
  } else {
    problems.emplace_back("category_code: expected integer");
  }
  for (const char* key : {"behavior_name", "category_name"}) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      problems.push_back(std::string(key) + ": expected string");
      continue;
    }
    (std::string_view(key) == "behavior_name" ? def.behavior_name : def.category_name) =
        it->get<std::string>();
  }
  if (!problems.empty()) throw SchemaError(std::move(problems));
  def.validate();
  return def;
}

Json encode_registry(const BehaviorRegistry& registry) {
  Json j = Json::object();
  j["revision"] = registry.revision();
  Json defs = Json::array();
  for (const auto& def : registry.definitions()) defs.push_back(encode_definition(def));
  j["definitions"] = std::move(defs);
  return j;
}

std::vector<BehaviorDefinition> decode_definitions(const Json& j) {
  const Json* list = &j;
  if (j.is_object()) {
    auto it = j.find("definitions");
    if (it == j.end()) throw SchemaError({"definitions: missing"});
    list = &*it;
  }
  if (!list->is_array()) throw SchemaError({"definitions: expected an array"});
  std::vector<BehaviorDefinition> out;
  for (const auto& item : *list) out.push_back(decode_definition(item));
  return out;
}

Json encode_score_entry(std::string_view rater_id, const RaterScoreSheet::Entry& entry) {
  Json j = Json::object();
  j["rater_id"] = std::string(rater_id);
  j["event_id"] = entry.event_id;
  Json counts = Json::object();
  for (std::size_t k = 0; k < kScoreKeyCount; ++k) {
    counts[std::string(kScoreKeys[k])] = entry.counts[k];
  }
  j["counts"] = std::move(counts);
  Json majors = Json::object();
  const auto scores = major_scores(entry.counts);
  for (std::size_t m = 0; m < kMajorCount; ++m) {
    majors[std::string(kMajors[m].code)] = scores[m];
  }
  j["majors"] = std::move(majors);
  return j;
}

std::string score_sheet_text(const RaterScoreSheet& sheet) {
  std::string out;
  for (const auto& entry : sheet.entries()) {
    out += encode_score_entry(sheet.rater_id(), entry).dump();
    out += '\n';
  }
  return out;
}

void for_each_jsonl_text(std::string_view text, std::string_view origin,
                         const std::function<void(const Json&, std::size_t line)>& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParse, location(origin, line_no) + ": " + e.what());
    }
    try {
      fn(j, line_no);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, location(origin, line_no) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, location(origin, line_no) + ": " + e.what());
    }
  }
}

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const Json&, std::size_t line)>& fn) {
  const std::string text = read_text_file(path);
  for_each_jsonl_text(text, path.string(), fn);
}

std::vector<DataRecord> read_records(const std::filesystem::path& path) {
  std::vector<DataRecord> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t) {
    if (j.is_object() && j.contains("format")) return;  // header
    if (j.is_object() && j.contains("record") && j.contains("sequence")) {
      out.push_back(decode_record(j["record"]));
      return;
    }
    out.push_back(decode_record(j));
  });
  return out;
}

namespace {

RaterScoreSheet::Entry decode_score_entry(const Json& j, std::string* rater_id) {
  if (!j.is_object()) throw SchemaError({"score line: expected an object"});
  std::vector<std::string> problems;
  RaterScoreSheet::Entry entry;
  if (auto it = j.find("event_id"); it != j.end() && it->is_string()) {
    entry.event_id = it->get<std::string>();
  } else {
    problems.emplace_back("event_id: expected string");
  }
  if (rater_id) {
    if (auto it = j.find("rater_id"); it != j.end() && it->is_string()) {
      *rater_id = it->get<std::string>();
    } else {
      problems.emplace_back("rater_id: expected string");
    }
  }
  auto counts = j.find("counts");
  if (counts == j.end() || !counts->is_object()) {
    problems.emplace_back("counts: expected an object");
  } else {
    for (auto it = counts->begin(); it != counts->end(); ++it) {
      auto key = score_key_index(it.key());
      if (!key) {
        problems.push_back("counts." + it.key() + ": unknown category");
      } else if (!it->is_number_unsigned()) {
        problems.push_back("counts." + it.key() + ": expected a non-negative integer");
      } else {
        entry.counts[*key] = it->get<std::uint32_t>();
      }
    }
  }
  if (!problems.empty()) throw SchemaError(std::move(problems));
  return entry;
}

}  // namespace

RaterScoreSheet read_score_sheet(const std::filesystem::path& path) {
  std::optional<RaterScoreSheet> sheet;
  for_each_jsonl(path, [&](const Json& j, std::size_t) {
    std::string rater;
    auto entry = decode_score_entry(j, &rater);
    if (!sheet) sheet.emplace(rater);
    if (sheet->rater_id() != rater) {
      throw SchemaError({"rater_id: '" + rater + "' differs from '" + sheet->rater_id() + "'"});
    }
    sheet->add(std::move(entry.event_id), entry.counts);
  });
  if (!sheet) return RaterScoreSheet(path.stem().string());
  return std::move(*sheet);
}

std::vector<RaterScoreSheet::Entry> read_score_entries(const std::filesystem::path& path) {
  std::vector<RaterScoreSheet::Entry> out;
  for_each_jsonl(path, [&](const Json& j, std::size_t) { out.push_back(decode_score_entry(j, nullptr)); });
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace exl::core
