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

#include "analysis/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "core/error.hpp"

namespace exl::analysis {

namespace {

constexpr const char* kKappaPNote =
    "p-values use the large-sample normal approximation of kappa / SE under kappa = 0";

core::Json nullable(const std::optional<double>& v) {
  return v ? core::Json(*v) : core::Json(nullptr);
}

core::Json alignment_json(const std::string& name, const AlignmentResult& r) {
  core::Json j = core::Json::object();
  j["method"] = name;
  j["reference"] = r.reference_count;
  j["candidates"] = r.candidates.size();
  j["correct"] = r.correct;
  j["missing"] = r.missing_count();
  j["incorrect"] = r.incorrect;
  j["correct_percent"] = r.correct_percent();
  return j;
}

}  // namespace

std::string format_kappa(const std::optional<double>& kappa) {
  if (!kappa) return "-";
  const double k = *kappa;
  if (k != 0 && std::abs(k) < 0.005) return fmt::format("{:.4f}", k);
  return fmt::format("{:.2f}", k);
}

std::string format_p(const std::optional<double>& p) {
  if (!p) return "-";
  if (*p < 0.001) return "< .001";
  return fmt::format("{:.3f}", *p);
}

AlignmentComparison compare_alignment(const std::string& first_name,
                                      const std::vector<CandidateEntry>& first,
                                      const std::string& second_name,
                                      const std::vector<CandidateEntry>& second,
                                      const std::vector<ReferenceEntry>& reference,
                                      TimestampMs tolerance_ms) {
  AlignmentComparison cmp;
  cmp.first_name = first_name;
  cmp.second_name = second_name;
  cmp.tolerance_ms = tolerance_ms;
  cmp.first = align(first, reference, tolerance_ms);
  cmp.second = align(second, reference, tolerance_ms);
  cmp.table = contingency_from_alignment(cmp.first, cmp.second);
  try {
    cmp.chi_square = chi_square_2x2(cmp.table);
  } catch (const Error& e) {
    cmp.chi_square_error = e.what();
  }
  cmp.odds = odds_ratio(cmp.table);
  return cmp;
}

core::Json to_json(const AlignmentComparison& cmp) {
  core::Json j = core::Json::object();
  j["report"] = "alignment";
  j["tolerance_ms"] = cmp.tolerance_ms;
  j["methods"] = core::Json::array(
      {alignment_json(cmp.first_name, cmp.first), alignment_json(cmp.second_name, cmp.second)});
  j["table"] = {{"a", cmp.table.a}, {"b", cmp.table.b}, {"c", cmp.table.c}, {"d", cmp.table.d}};
  if (cmp.chi_square) {
    j["chi_square"] = {{"chi2", cmp.chi_square->chi2},
                       {"df", cmp.chi_square->df},
                       {"p_value", cmp.chi_square->p_value},
                       {"yates", cmp.chi_square->yates}};
  } else {
    j["chi_square"] = {{"error", cmp.chi_square_error}};
  }
  j["odds_ratio"] = {{"or_correct", cmp.odds.or_correct},
                     {"or_missing_incorrect", cmp.odds.or_missing_incorrect},
                     {"haldane_corrected", cmp.odds.haldane_corrected}};
  return j;
}

std::string render_text(const AlignmentComparison& cmp) {
  std::string out = fmt::format("Alignment against {} reference entries (tolerance {} ms)\n\n",
                                cmp.first.reference_count, cmp.tolerance_ms);
  out += fmt::format("{:<16}{:>10}{:>10}{:>11}{:>10}\n", "method", "correct", "missing",
                     "incorrect", "correct%");
  for (const auto* m : {&cmp.first, &cmp.second}) {
    const auto& name = m == &cmp.first ? cmp.first_name : cmp.second_name;
    out += fmt::format("{:<16}{:>10}{:>10}{:>11}{:>9.1f}%\n", name, m->correct, m->missing_count(),
                       m->incorrect, m->correct_percent());
  }
  out += fmt::format("\n2x2 table (correct, missing or incorrect): ({}, {}, {}, {})\n", cmp.table.a,
                     cmp.table.b, cmp.table.c, cmp.table.d);
  if (cmp.chi_square) {
    out += fmt::format("chi2 = {:.2f}, df = {}, p {}\n", cmp.chi_square->chi2, cmp.chi_square->df,
                       cmp.chi_square->p_value < 0.001
                           ? std::string("< .001")
                           : fmt::format("= {:.3f}", cmp.chi_square->p_value));
  } else {
    out += "chi2 undefined: " + cmp.chi_square_error + "\n";
  }
  out += fmt::format("odds ratio: {} {:.2f} times more likely to be correct; {:.2f} for missing "
                     "or incorrect{}\n",
                     cmp.first_name, cmp.odds.or_correct, cmp.odds.or_missing_incorrect,
                     cmp.odds.haldane_corrected ? " (Haldane-corrected)" : "");
  return out;
}

core::Json to_json(const CompletenessAudit& audit, std::size_t dropped_records) {
  core::Json j = core::Json::object();
  j["report"] = "completeness";
  j["records"] = audit.record_count;
  j["dropped_empty_records"] = dropped_records;
  core::Json types = core::Json::array();
  for (const auto& t : audit.types) {
    types.push_back({{"type", std::string(t.code)},
                     {"label", std::string(t.label)},
                     {"source", std::string(core::source_name(t.source))},
                     {"count", t.count},
                     {"percent", t.percent}});
  }
  j["types"] = std::move(types);
  core::Json sources = core::Json::array();
  for (const auto& s : audit.sources) {
    sources.push_back({{"source", std::string(core::source_name(s.source))},
                       {"types", s.type_count},
                       {"mean_count", s.mean_count},
                       {"mean_percent", s.mean_percent}});
  }
  j["sources"] = std::move(sources);
  return j;
}

std::string render_text(const CompletenessAudit& audit, std::size_t dropped_records) {
  std::string out = fmt::format("Completeness over {} records ({} all-error records dropped)\n\n",
                                audit.record_count, dropped_records);
  out += fmt::format("{:<6}{:<34}{:<13}{:>7}{:>9}\n", "type", "label", "source", "count", "%");
  for (const auto& t : audit.types) {
    out += fmt::format("{:<6}{:<34}{:<13}{:>7}{:>8.1f}%\n", t.code, t.label,
                       core::source_name(t.source), t.count, t.percent);
  }
  out += fmt::format("\n{:<13}{:>7}{:>12}{:>9}\n", "source", "types", "mean count", "mean %");
  for (const auto& s : audit.sources) {
    out += fmt::format("{:<13}{:>7}{:>12.1f}{:>8.1f}%\n", core::source_name(s.source),
                       s.type_count, s.mean_count, s.mean_percent);
  }
  return out;
}

core::Json to_json(const KappaReport& report) {
  core::Json j = core::Json::object();
  j["report"] = "kappa";
  j["events"] = report.event_count;
  j["p_value_method"] = kKappaPNote;
  core::Json rows = core::Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"category", r.code},
                    {"label", r.label},
                    {"major", r.major},
                    {"kappa", nullable(r.result.kappa)},
                    {"p_value", nullable(r.result.p_value)},
                    {"bucket", std::string(kappa_bucket_name(r.bucket))},
                    {"range", kappa_bucket_rank(r.bucket)},
                    {"observed_agreement", r.result.observed_agreement},
                    {"expected_agreement", r.result.expected_agreement}});
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string render_text(const KappaReport& report) {
  std::string out = fmt::format("Inter-rater agreement over {} events\n\n", report.event_count);
  out += fmt::format("{:<48}{:>9}{:>9}{:>7}  {}\n", "category", "kappa", "p", "range", "bucket");
  for (const auto& r : report.rows) {
    const std::string name =
        r.major ? fmt::format("{}. {}", r.code, r.label) : fmt::format("  {}. {}", r.code, r.label);
    const int rank = kappa_bucket_rank(r.bucket);
    out += fmt::format("{:<48}{:>9}{:>9}{:>7}  {}\n", name, format_kappa(r.result.kappa),
                       format_p(r.result.p_value), rank < 0 ? std::string("-") : std::to_string(rank),
                       kappa_bucket_name(r.bucket));
  }
  out += fmt::format("\n- = undefined (both raters constant)\nnote: {}\n", kKappaPNote);
  return out;
}

core::Json to_json(const FrequencyTable& table) {
  core::Json j = core::Json::object();
  j["report"] = "frequency";
  j["events"] = table.event_count;
  j["grand_total"] = table.grand_total;
  core::Json majors = core::Json::array();
  for (const auto& m : table.majors) {
    majors.push_back({{"category", std::string(m.code)},
                      {"label", std::string(m.label)},
                      {"count", m.count},
                      {"percent", m.percent}});
  }
  j["majors"] = std::move(majors);
  core::Json keys = core::Json::array();
  for (const auto& k : table.keys) {
    keys.push_back({{"category", std::string(k.code)},
                    {"label", std::string(k.label)},
                    {"count", k.count},
                    {"percent", k.percent}});
  }
  j["minors"] = std::move(keys);
  return j;
}

std::string render_text(const FrequencyTable& table) {
  std::string out = fmt::format("Movement frequencies over {} events, {} movements\n\n",
                                table.event_count, table.grand_total);
  out += fmt::format("{:<48}{:>7}{:>9}\n", "category", "count", "%");
  for (std::size_t m = 0; m < core::kMajorCount; ++m) {
    const auto& row = table.majors[m];
    out += fmt::format("{:<48}{:>7}{:>8.1f}%\n", fmt::format("{}. {}", row.code, row.label),
                       row.count, row.percent);
    for (std::size_t k = 0; k < core::kScoreKeyCount; ++k) {
      if (k == core::kVocalizationKey || static_cast<std::size_t>(core::major_of_score_key(k)) != m)
        continue;
      const auto& key = table.keys[k];
      out += fmt::format("{:<48}{:>7}{:>8.1f}%\n", fmt::format("  {}. {}", key.code, key.label),
                         key.count, key.percent);
    }
  }
  out += fmt::format("{:<48}{:>7}{:>8.1f}%\n", "total", table.grand_total,
                     table.grand_total ? 100.0 : 0.0);
  return out;
}

}  // namespace exl::analysis
