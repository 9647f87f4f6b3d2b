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

#include "core/registry.hpp"

#include <algorithm>

namespace exl::core {

DuplicateBehaviorError::DuplicateBehaviorError(BehaviorDefinition existing)
    : Error(ErrorCode::kDuplicate,
            "behavior '" + existing.behavior_name + "' already exists in category '" +
                existing.category_name + "' (code " + std::to_string(existing.category_code) +
                ")"),
      existing_(std::move(existing)) {}

BehaviorRegistry BehaviorRegistry::from_definitions(const std::vector<BehaviorDefinition>& defs,
                                                    std::uint64_t revision) {
  BehaviorRegistry registry;
  for (const auto& def : defs) {
    def.validate();
    if (auto existing = registry.find(def.behavior_name, def.category_name)) {
      throw DuplicateBehaviorError(*existing);
    }
    registry.insert_sorted(def);
  }
  registry.revision_ = revision;
  return registry;
}

std::vector<BehaviorDefinition> BehaviorRegistry::definitions() const {
  std::vector<BehaviorDefinition> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.def);
  return out;
}

std::vector<std::string> BehaviorRegistry::categories() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (std::find(out.begin(), out.end(), e.def.category_name) == out.end()) {
      out.push_back(e.def.category_name);
    }
  }
  return out;
}

std::optional<BehaviorDefinition> BehaviorRegistry::find(std::string_view behavior_name,
                                                         std::string_view category_name) const {
  for (const auto& e : entries_) {
    if (e.def.behavior_name == behavior_name && e.def.category_name == category_name) {
      return e.def;
    }
  }
  return std::nullopt;
}

std::optional<BehaviorDefinition> BehaviorRegistry::find_by_name(
    std::string_view behavior_name) const {
  std::optional<BehaviorDefinition> found;
  for (const auto& e : entries_) {
    if (e.def.behavior_name != behavior_name) continue;
    if (found) {
      throw Error(ErrorCode::kInvalidArgument,
                  "behavior '" + std::string(behavior_name) +
                      "' exists in several categories; a category_name is required");
    }
    found = e.def;
  }
  return found;
}

void BehaviorRegistry::insert_sorted(const BehaviorDefinition& def) {
  // New entries carry the largest insertion index, so they go after every
  // entry with an equal or smaller code.
  auto pos = std::upper_bound(
      entries_.begin(), entries_.end(), def.category_code,
      [](std::int64_t code, const Entry& e) { return code < e.def.category_code; });
  entries_.insert(pos, Entry{def, next_insertion_++});
}

BehaviorRegistry BehaviorRegistry::upserted(const BehaviorDefinition& def) const {
  def.validate();
  if (auto existing = find(def.behavior_name, def.category_name)) {
    throw DuplicateBehaviorError(*existing);
  }
  BehaviorRegistry next = *this;
  next.insert_sorted(def);
  ++next.revision_;
  return next;
}

BehaviorRegistry BehaviorRegistry::replaced(const std::vector<BehaviorDefinition>& defs) const {
  return from_definitions(defs, revision_ + 1);
}

BehaviorRegistry registry_upsert(const BehaviorRegistry& registry, const BehaviorDefinition& def) {
  return registry.upserted(def);
}

BehaviorRegistry default_registry() {
  return BehaviorRegistry::from_definitions({
      {0, "Want toilet", "Needs"},
      {1, "Hungry", "Needs"},
      {2, "Thirsty", "Needs"},
      {0, "Greeting", "Social"},
      {1, "Goodbye", "Social"},
      {0, "Happy", "Feelings"},
      {1, "Uncomfortable", "Feelings"},
      {0, "Play", "Requests"},
      {1, "Rest", "Requests"},
  });
}

}  // namespace exl::core
