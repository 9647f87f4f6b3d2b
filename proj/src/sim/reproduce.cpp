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

#include "sim/reproduce.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>

#include <fmt/format.h>

#include "analysis/alignment.hpp"
#include "analysis/completeness.hpp"
#include "analysis/contingency.hpp"
#include "analysis/frequency.hpp"
#include "analysis/kappa.hpp"
#include "core/error.hpp"
#include "sim/same_room.hpp"
#include "sim/simulate.hpp"

namespace exl::sim {

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Runs one check; `timed` is the part subject to the runtime limit.
CheckResult run_check(const std::string& name, double limit_ms,
                      const std::function<Outcome(double& timed_ms)>& body) {
  CheckResult r;
  r.name = name;
  r.limit_ms = limit_ms;
  try {
    double timed = 0;
    Outcome o = body(timed);
    r.elapsed_ms = timed;
    r.passed = o.passed;
    r.detail = std::move(o.detail);
    if (limit_ms > 0 && timed >= limit_ms) {
      r.passed = false;
      r.detail += fmt::format("; runtime limit {} ms exceeded", limit_ms);
    }
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  return r;
}

bool near(double v, double target, double tol) { return std::abs(v - target) <= tol; }

double round1(double v) { return std::round(v * 10.0) / 10.0; }

analysis::ContingencyTable2x2 alignment_table(const std::filesystem::path& dir) {
  const auto reference = analysis::read_reference(dir / "reference.jsonl");
  const auto app = analysis::align(analysis::read_candidates(dir / "app_log.jsonl"), reference);
  const auto manual =
      analysis::align(analysis::read_candidates(dir / "manual_log.jsonl"), reference);
  return analysis::contingency_from_alignment(app, manual);
}

constexpr analysis::ContingencyTable2x2 kReferenceTable{269, 32, 195, 106};

}  // namespace

std::vector<CheckResult> run_reproduction(const std::filesystem::path& data_dir) {
  const auto fixtures = data_dir / "fixtures";
  std::vector<CheckResult> out;

  out.push_back(run_check("chi-square", 1.0, [&](double& timed) {
    const auto table = alignment_table(fixtures / "alignment");
    const auto t0 = Clock::now();
    const auto chi = analysis::chi_square_2x2(table);
    timed = ms_since(t0);
    const bool ok = table == kReferenceTable && near(chi.chi2, 51.48, 0.01) && chi.df == 1 &&
                    chi.p_value < 0.001;
    return Outcome{ok, fmt::format("table ({}, {}, {}, {}), chi2 = {:.3f}, df = {}, p = {:.3g}",
                                   table.a, table.b, table.c, table.d, chi.chi2, chi.df,
                                   chi.p_value)};
  }));

  out.push_back(run_check("odds-ratio", 1.0, [&](double& timed) {
    const auto table = alignment_table(fixtures / "alignment");
    const auto t0 = Clock::now();
    const auto odds = analysis::odds_ratio(table);
    timed = ms_since(t0);
    const bool ok = table == kReferenceTable && !odds.haldane_corrected &&
                    odds.or_correct >= 4.55 && odds.or_correct <= 4.60 &&
                    odds.or_missing_incorrect >= 0.21 && odds.or_missing_incorrect <= 0.23;
    return Outcome{ok, fmt::format("OR correct = {:.4f}, OR missing/incorrect = {:.4f}",
                                   odds.or_correct, odds.or_missing_incorrect)};
  }));

  out.push_back(run_check("completeness", 1000.0, [&](double& timed) {
    auto records = core::read_records(fixtures / "completeness" / "records.jsonl");
    const auto t0 = Clock::now();
    const auto filtered = analysis::drop_empty_records(std::move(records));
    const auto audit = analysis::completeness_audit(filtered.kept);
    timed = ms_since(t0);

    struct Expect {
      const char* first;
      const char* last;
      std::size_t count;
      double percent;
    };
    const Expect expected[] = {{"iB1", "iB3", 269, 82.3}, {"GPS1", "GPS2", 327, 100.0},
                               {"S1", "S1", 213, 65.1},   {"S8", "S8", 266, 81.3},
                               {"S9", "S11", 327, 100.0}, {"A1", "A13", 312, 95.4},
                               {"A14", "A14", 288, 88.1}, {"A15", "A15", 312, 95.4}};
    std::vector<std::string> bad;
    if (audit.record_count != 327) bad.push_back(fmt::format("records {}", audit.record_count));
    for (const auto& e : expected) {
      for (std::size_t i = *core::slot_index(e.first); i <= *core::slot_index(e.last); ++i) {
        const auto& t = audit.types[i];
        if (t.count != e.count || round1(t.percent) != e.percent) {
          bad.push_back(fmt::format("{} {}/{:.1f}%", t.code, t.count, t.percent));
        }
      }
    }
    const double alps = audit.source(core::Source::kEnv).mean_percent;
    const double api = audit.source(core::Source::kWeather).mean_percent;
    if (alps < 93.0 || alps > 94.0) bad.push_back(fmt::format("ALPS mean {:.2f}%", alps));
    if (!near(api, 94.9, 0.1)) bad.push_back(fmt::format("API mean {:.2f}%", api));
    return Outcome{bad.empty(),
                   bad.empty()
                       ? fmt::format("327 records ({} dropped), iBeacon 82.3%, GPS 100%, "
                                     "ALPS mean {:.2f}%, API mean {:.2f}%",
                                     filtered.dropped, alps, api)
                       : fmt::format("mismatch: {}", fmt::join(bad, "; "))};
  }));

  out.push_back(run_check("frequency", 1000.0, [&](double& timed) {
    const auto dir = fixtures / "scores";
    const auto r1 = core::read_score_sheet(dir / "rater1.jsonl");
    const auto r2 = core::read_score_sheet(dir / "rater2.jsonl");
    std::map<std::string, core::MovementCounts, std::less<>> resolutions;
    for (auto& e : core::read_score_entries(dir / "resolutions.jsonl")) {
      resolutions.emplace(std::move(e.event_id), e.counts);
    }
    const auto consensus = core::read_score_sheet(dir / "consensus.jsonl");
    const auto t0 = Clock::now();
    const auto merged = analysis::consensus_merge(r1, r2, resolutions);
    const auto table = analysis::frequency_table(consensus);
    timed = ms_since(t0);
    if (merged.entries() != consensus.entries()) {
      return Outcome{false, "rater sheets and resolutions do not merge to the consensus sheet"};
    }
    const std::array<std::uint64_t, 6> counts = {104, 61, 146, 154, 187, 24};
    const std::array<double, 6> percents = {15.4, 9.0, 21.6, 22.8, 27.7, 3.6};
    bool ok = table.grand_total == 676;
    for (std::size_t m = 0; m < 6; ++m) {
      ok = ok && table.majors[m].count == counts[m] &&
           near(table.majors[m].percent, percents[m], 0.05);
    }
    std::vector<std::string> parts;
    for (const auto& m : table.majors) parts.push_back(fmt::format("{} {}", m.code, m.count));
    return Outcome{ok, fmt::format("{} events, total {}: {}", table.event_count,
                                   table.grand_total, fmt::join(parts, ", "))};
  }));

  out.push_back(run_check("kappa-oracle", 0, [&](double&) {
    std::mt19937_64 rng(0xCAFE);
    std::size_t worst_index = 0;
    double worst = 0;
    std::size_t defined = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
      const std::size_t n = 5 + rng() % 287;
      const double bias1 = (rng() % 1000) / 1000.0, bias2 = (rng() % 1000) / 1000.0;
      std::vector<std::uint8_t> x(n), y(n);
      for (std::size_t j = 0; j < n; ++j) {
        x[j] = (rng() % 1000) / 1000.0 < bias1;
        y[j] = (rng() % 4 == 0) ? x[j] : (rng() % 1000) / 1000.0 < bias2;
      }
      double po = 0, p1 = 0, p2 = 0;
      for (std::size_t j = 0; j < n; ++j) {
        po += x[j] == y[j];
        p1 += x[j];
        p2 += y[j];
      }
      po /= n;
      p1 /= n;
      p2 /= n;
      const double pe = p1 * p2 + (1 - p1) * (1 - p2);
      const auto k = analysis::cohen_kappa(x, y);
      if (pe == 1.0) {
        if (k.kappa) return Outcome{false, fmt::format("vector {} should be undefined", i)};
        continue;
      }
      const bool both_constant = (p1 == 0 || p1 == 1) && (p2 == 0 || p2 == 1);
      if (both_constant) continue;
      if (!k.kappa) return Outcome{false, fmt::format("vector {} undefined", i)};
      ++defined;
      const double diff = std::abs(*k.kappa - (po - pe) / (1 - pe));
      if (diff > worst) {
        worst = diff;
        worst_index = i;
      }
    }
    const std::vector<std::uint8_t> same = {1, 0, 1, 1, 0, 0, 1};
    const auto identical = analysis::cohen_kappa(same, same);
    const std::vector<std::uint8_t> zeros(12, 0);
    const auto constant = analysis::cohen_kappa(zeros, zeros);
    std::vector<std::uint8_t> h1, h2;
    auto put = [&](int a, int b, int count) {
      for (int i = 0; i < count; ++i) {
        h1.push_back(static_cast<std::uint8_t>(a));
        h2.push_back(static_cast<std::uint8_t>(b));
      }
    };
    put(1, 1, 20);
    put(1, 0, 5);
    put(0, 1, 10);
    put(0, 0, 15);
    const auto hand = analysis::cohen_kappa(h1, h2);
    const bool ok = worst <= 1e-12 && identical.kappa && *identical.kappa == 1.0 &&
                    !constant.kappa && hand.kappa && *hand.kappa == 0.4;
    return Outcome{ok, fmt::format("{} defined vectors, max |diff| {:.3g} (vector {}); identical "
                                   "-> {}, constant -> {}, hand case -> {}",
                                   defined, worst, worst_index,
                                   identical.kappa ? fmt::format("{}", *identical.kappa) : "-",
                                   constant.kappa ? "defined" : "undefined",
                                   hand.kappa ? fmt::format("{}", *hand.kappa) : "-")};
  }));

  out.push_back(run_check("kappa-buckets", 0, [&](double&) {
    using analysis::KappaBucket;
    const std::pair<double, KappaBucket> cases[] = {
        {0.95, KappaBucket::kAlmostPerfect}, {0.88, KappaBucket::kAlmostPerfect},
        {0.83, KappaBucket::kAlmostPerfect}, {0.70, KappaBucket::kSubstantial},
        {0.78, KappaBucket::kSubstantial},   {0.40, KappaBucket::kFair},
        {0.21, KappaBucket::kFair},          {-0.0003, KappaBucket::kLessThanChance}};
    std::vector<std::string> parts;
    bool ok = true;
    for (const auto& [k, want] : cases) {
      const auto got = analysis::kappa_bucket(k);
      ok = ok && got == want;
      parts.push_back(fmt::format("{} -> {}", k, analysis::kappa_bucket_name(got)));
    }
    return Outcome{ok, fmt::format("{}", fmt::join(parts, ", "))};
  }));

  out.push_back(run_check("same-room-beacon", 10'000.0, [&](double& timed) {
    const auto t0 = Clock::now();
    SameRoomParams noisy;
    noisy.seed = 42;
    const auto with_noise = same_room_accuracy(noisy);
    SameRoomParams clean = noisy;
    clean.noise_sigma_db = 0.0;
    const auto without_noise = same_room_accuracy(clean);
    timed = ms_since(t0);
    const bool ok = with_noise.rate() >= 0.93 && without_noise.matches == without_noise.scans;
    return Outcome{ok, fmt::format("sigma 4 dB: {:.2f}% of {} scans; sigma 0: {:.2f}%",
                                   100 * with_noise.rate(), with_noise.scans,
                                   100 * without_noise.rate())};
  }));

  out.push_back(run_check("effectively-once", 30'000.0, [&](double& timed) {
    const auto scenario = load_scenario(data_dir / "scenarios" / "effectively_once.json");
    std::size_t during_outage = 0;
    for (const auto& c : scenario.clicks) during_outage += scenario.outage(FaultTarget::kStore, c.at_ms);
    const auto t0 = Clock::now();
    const auto res = run_simulation(scenario);
    timed = ms_since(t0);
    const bool ok = scenario.clicks.size() == 50 && during_outage == 20 &&
                    res.records.size() == 50 && res.store_count == 50 &&
                    res.distinct_store_event_ids == 50 && res.store_count_after_replay == 50 &&
                    res.replay_mismatches == 0;
    return Outcome{ok, fmt::format("{} clicks ({} during store outage), log {}, store {} ({} "
                                   "distinct), after replay {}",
                                   scenario.clicks.size(), during_outage, res.records.size(),
                                   res.store_count, res.distinct_store_event_ids,
                                   res.store_count_after_replay)};
  }));

  out.push_back(run_check("alignment-exact-copy", 0, [&](double&) {
    const auto reference = analysis::read_reference(fixtures / "alignment" / "reference.jsonl");
    std::vector<analysis::CandidateEntry> copy;
    for (const auto& r : reference) copy.push_back({r.behavior_name, r.occurred_at});
    const auto res = analysis::align(copy, reference);
    const bool ok = !reference.empty() && res.correct == reference.size() &&
                    res.missing_count() == 0 && res.incorrect == 0;
    return Outcome{ok, fmt::format("{} of {} correct ({:.1f}%)", res.correct, reference.size(),
                                   res.correct_percent())};
  }));

  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

std::string render_checks(const std::vector<CheckResult>& checks) {
  std::string out;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    passed += c.passed;
    out += fmt::format("{} {:<22} {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
  }
  out += fmt::format("{}/{} checks passed\n", passed, checks.size());
  return out;
}

core::Json checks_json(const std::vector<CheckResult>& checks) {
  core::Json list = core::Json::array();
  for (const auto& c : checks) {
    list.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return {{"passed", all_passed(checks)}, {"checks", std::move(list)}};
}

}  // namespace exl::sim
