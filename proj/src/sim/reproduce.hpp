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
#include <string>
#include <vector>

#include "core/codec.hpp"

namespace exl::sim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double elapsed_ms = 0;
  double limit_ms = 0;  // 0: no runtime limit
};

// Re-derives every reference figure from the bundled fixtures under data_dir.
std::vector<CheckResult> run_reproduction(const std::filesystem::path& data_dir);

bool all_passed(const std::vector<CheckResult>& checks);
std::string render_checks(const std::vector<CheckResult>& checks);
core::Json checks_json(const std::vector<CheckResult>& checks);

}  // namespace exl::sim
