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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/error.hpp"
#include "core/model.hpp"

namespace exl::core {

class DuplicateBehaviorError : public Error {
 public:
  explicit DuplicateBehaviorError(BehaviorDefinition existing);
  const BehaviorDefinition& existing() const noexcept { return existing_; }

 private:
  BehaviorDefinition existing_;
};

// User-editable behavior catalog. Identity is (behavior_name, category_name);
// category_code is only a display rank. Display order is ascending code with
// ties kept in insertion order.
class BehaviorRegistry {
 public:
  BehaviorRegistry() = default;

  // Builds a registry from definitions in insertion order. Throws SchemaError or
  // DuplicateBehaviorError.
  static BehaviorRegistry from_definitions(const std::vector<BehaviorDefinition>& defs,
                                           std::uint64_t revision = 0);

  std::vector<BehaviorDefinition> definitions() const;
  std::uint64_t revision() const noexcept { return revision_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  // Category names in display order of their first member.
  std::vector<std::string> categories() const;

  std::optional<BehaviorDefinition> find(std::string_view behavior_name,
                                         std::string_view category_name) const;
  // Resolves a bare behavior name. Throws kInvalidArgument if it is ambiguous
  // across categories.
  std::optional<BehaviorDefinition> find_by_name(std::string_view behavior_name) const;

  // New registry with the definition added and the revision bumped.
  BehaviorRegistry upserted(const BehaviorDefinition& def) const;
  // New registry holding exactly `defs` (in that insertion order), revision bumped.
  BehaviorRegistry replaced(const std::vector<BehaviorDefinition>& defs) const;

 private:
  struct Entry {
    BehaviorDefinition def;
    std::uint64_t insertion_index = 0;
  };

  void insert_sorted(const BehaviorDefinition& def);

  std::vector<Entry> entries_;  // kept in display order
  std::uint64_t next_insertion_ = 0;
  std::uint64_t revision_ = 0;
};

BehaviorRegistry registry_upsert(const BehaviorRegistry& registry, const BehaviorDefinition& def);

// Small catalog used by simulations and bundled fixtures.
BehaviorRegistry default_registry();

}  // namespace exl::core
