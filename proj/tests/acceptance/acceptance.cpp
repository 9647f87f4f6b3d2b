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

// One line per acceptance criterion, run against the bundled data directory
// (or the directory given as the first argument). Exit 1 on any failure.

#include <cstdio>
#include <map>
#include <string>

#include <fmt/format.h>

#include "sim/reproduce.hpp"

namespace {

struct Criterion {
  const char* check;
  const char* title;
};

constexpr Criterion kCriteria[] = {
    {"chi-square", "chi-square on (269, 32, 195, 106)"},
    {"odds-ratio", "odds ratio on the same table"},
    {"completeness", "completeness audit of the 327-record fixture"},
    {"frequency", "movement frequencies of the consensus fixture"},
    {"kappa-oracle", "kappa against the brute-force oracle"},
    {"kappa-buckets", "kappa bucket spot checks"},
    {"same-room-beacon", "same-room nearest beacon accuracy"},
    {"effectively-once", "end-to-end effectively-once sync"},
    {"alignment-exact-copy", "alignment of exact-copy logs"},
};

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path data_dir = argc > 1 ? argv[1] : EXL_DATA_DIR;
  const auto checks = exl::sim::run_reproduction(data_dir);
  std::map<std::string, const exl::sim::CheckResult*> by_name;
  for (const auto& c : checks) by_name[c.name] = &c;

  int passed = 0, total = 0;
  for (const auto& crit : kCriteria) {
    ++total;
    auto it = by_name.find(crit.check);
    if (it == by_name.end()) {
      fmt::print("FAIL  {:<48} check '{}' did not run\n", crit.title, crit.check);
      continue;
    }
    const auto& c = *it->second;
    const std::string timing = c.limit_ms > 0
                                   ? fmt::format("{:.3f} ms of {:g} ms", c.elapsed_ms, c.limit_ms)
                                   : std::string("no runtime limit");
    fmt::print("{}  {:<48} {} [{}]\n", c.passed ? "PASS" : "FAIL", crit.title, c.detail, timing);
    passed += c.passed;
  }
  fmt::print("{}/{} acceptance criteria met\n", passed, total);
  std::fflush(stdout);
  return passed == total ? 0 : 1;
}
