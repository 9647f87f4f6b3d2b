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

#include <doctest.h>

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "analysis/alignment.hpp"
#include "analysis/completeness.hpp"
#include "analysis/contingency.hpp"
#include "analysis/distributions.hpp"
#include "analysis/frequency.hpp"
#include "analysis/kappa.hpp"
#include "analysis/report.hpp"
#include "core/error.hpp"
#include "support/test_support.hpp"

using namespace exl;
using namespace exl::analysis;

namespace {

double pearson_oracle(double a, double b, double c, double d) {
  const double n = a + b + c + d;
  const double obs[4] = {a, b, c, d};
  const double row[2] = {a + b, c + d};
  const double col[2] = {a + c, b + d};
  double sum = 0;
  for (int i = 0; i < 4; ++i) {
    const double e = row[i / 2] * col[i % 2] / n;
    sum += (obs[i] - e) * (obs[i] - e) / e;
  }
  return sum;
}

double kappa_oracle(const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y) {
  const double n = static_cast<double>(x.size());
  double agree = 0, x1 = 0, y1 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    agree += x[i] == y[i];
    x1 += x[i];
    y1 += y[i];
  }
  const double po = agree / n;
  const double pe = (x1 / n) * (y1 / n) + (1 - x1 / n) * (1 - y1 / n);
  return (po - pe) / (1 - pe);
}

// Straight transcription of the matching rule: repeatedly take the earliest
// unvisited candidate and scan every reference entry.
struct OracleAlignment {
  std::size_t correct = 0, incorrect = 0, missing = 0;
};

OracleAlignment alignment_oracle(const std::vector<CandidateEntry>& cand,
                                 const std::vector<ReferenceEntry>& ref, TimestampMs tol) {
  std::vector<int> pair(cand.size(), -1);
  std::vector<bool> used(ref.size(), false);
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<bool> visited(cand.size(), false);
    for (std::size_t step = 0; step < cand.size(); ++step) {
      int i = -1;
      for (std::size_t k = 0; k < cand.size(); ++k) {
        if (!visited[k] && (i < 0 || cand[k].at < cand[static_cast<std::size_t>(i)].at)) i = static_cast<int>(k);
      }
      visited[static_cast<std::size_t>(i)] = true;
      const auto& c = cand[static_cast<std::size_t>(i)];
      if (pair[static_cast<std::size_t>(i)] >= 0) continue;
      int best = -1;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        const TimestampMs gap = std::llabs(ref[j].occurred_at - c.at);
        if (used[j] || gap > tol) continue;
        if (pass == 0 && ref[j].behavior_name != c.behavior_name) continue;
        if (best < 0 || gap < std::llabs(ref[static_cast<std::size_t>(best)].occurred_at - c.at)) best = static_cast<int>(j);
      }
      if (best >= 0) {
        pair[static_cast<std::size_t>(i)] = best;
        used[static_cast<std::size_t>(best)] = true;
      }
    }
  }
  OracleAlignment out;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const bool ok = pair[i] >= 0 && ref[static_cast<std::size_t>(pair[i])].behavior_name == cand[i].behavior_name;
    ++(ok ? out.correct : out.incorrect);
  }
  for (bool u : used) out.missing += !u;
  return out;
}

// Largest number of same-name pairs any matching within tolerance could reach.
std::size_t max_same_name_pairs(const std::vector<CandidateEntry>& cand,
                                const std::vector<ReferenceEntry>& ref, TimestampMs tol,
                                std::size_t i = 0, std::uint32_t used = 0) {
  if (i == cand.size()) return 0;
  std::size_t best = max_same_name_pairs(cand, ref, tol, i + 1, used);
  for (std::size_t j = 0; j < ref.size(); ++j) {
    if (used & (1u << j)) continue;
    if (ref[j].behavior_name != cand[i].behavior_name) continue;
    if (std::llabs(ref[j].occurred_at - cand[i].at) > tol) continue;
    best = std::max(best, 1 + max_same_name_pairs(cand, ref, tol, i + 1, used | (1u << j)));
  }
  return best;
}

struct RandomLists {
  std::vector<CandidateEntry> cand;
  std::vector<ReferenceEntry> ref;
};

RandomLists random_lists(std::mt19937_64& rng, std::size_t max_len) {
  const char* names[] = {"A", "B", "C"};
  RandomLists out;
  const auto nc = rng() % (max_len + 1), nr = rng() % (max_len + 1);
  for (std::size_t i = 0; i < nc; ++i) {
    out.cand.push_back({names[rng() % 3], static_cast<TimestampMs>(rng() % 20'000)});
  }
  for (std::size_t i = 0; i < nr; ++i) {
    out.ref.push_back({names[rng() % 3], static_cast<TimestampMs>(rng() % 20'000)});
  }
  std::sort(out.ref.begin(), out.ref.end(),
            [](const auto& a, const auto& b) { return a.occurred_at < b.occurred_at; });
  return out;
}

core::MovementCounts counts_of(std::initializer_list<std::pair<std::string_view, std::uint32_t>> kv) {
  core::MovementCounts c{};
  for (const auto& [key, n] : kv) c[*core::score_key_index(key)] = n;
  return c;
}

core::DataRecord record_with(std::initializer_list<std::string_view> missing_codes) {
  auto r = testing::full_record("e", 1000);
  for (auto code : missing_codes) {
    for (std::size_t i = 0; i < core::kSlotCount; ++i) {
      if (core::kSlotSpecs[i].code == code) r.slots[i] = core::Slot::error(core::SlotError::kSourceUnavailable);
    }
  }
  return r;
}

}  // namespace

TEST_SUITE("chi-square") {
  TEST_CASE("reference table") {
    const auto r = chi_square_2x2({269, 32, 195, 106});
    CHECK(r.chi2 == doctest::Approx(51.48).epsilon(0.0002));
    CHECK(r.df == 1);
    CHECK(r.p_value < 0.001);
    CHECK_FALSE(r.yates);
  }

  TEST_CASE("identical rows give zero") {
    const auto r = chi_square_2x2({50, 50, 50, 50});
    CHECK(r.chi2 == 0);
    CHECK(r.p_value == doctest::Approx(1.0));
  }

  TEST_CASE("matches the expected-count formula") {
    CHECK(chi_square_2x2({10, 5, 4, 11}).chi2 == doctest::Approx(pearson_oracle(10, 5, 4, 11)).epsilon(1e-12));
  }

  TEST_CASE("zero marginal is an undefined test") {
    try {
      (void)chi_square_2x2({0, 0, 5, 5});
      FAIL("expected undefined");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUndefined);
    }
    CHECK_THROWS_AS((void)chi_square_2x2({3, 0, 5, 0}), Error);
  }

  TEST_CASE("continuity correction only on request") {
    const auto plain = chi_square_2x2({10, 5, 4, 11});
    const auto corrected = chi_square_2x2({10, 5, 4, 11}, true);
    CHECK(corrected.yates);
    CHECK(corrected.chi2 < plain.chi2);
  }

  TEST_CASE("random tables agree with the oracle and with row and column swaps") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t a = 1 + rng() % 500, b = 1 + rng() % 500, c = 1 + rng() % 500, d = 1 + rng() % 500;
      const double x = chi_square_2x2({a, b, c, d}).chi2;
      const double oracle = pearson_oracle(static_cast<double>(a), static_cast<double>(b),
                                           static_cast<double>(c), static_cast<double>(d));
      CHECK(std::abs(x - oracle) <= 1e-9 * std::max(1.0, oracle));
      CHECK(chi_square_2x2({c, d, a, b}).chi2 == doctest::Approx(x).epsilon(1e-12));
      CHECK(chi_square_2x2({b, a, d, c}).chi2 == doctest::Approx(x).epsilon(1e-12));
    }
  }

  TEST_CASE("survival function against closed forms") {
    for (double x : {0.1, 1.0, 3.84, 10.0, 51.48}) {
      CHECK(chi_square_sf(x, 1) == doctest::Approx(std::erfc(std::sqrt(x / 2))).epsilon(1e-10));
      CHECK(chi_square_sf(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-10));
    }
    CHECK(chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-9));
    CHECK(normal_sf(0) == doctest::Approx(0.5));
  }
}

TEST_SUITE("odds ratio") {
  TEST_CASE("reference table") {
    const auto r = odds_ratio({269, 32, 195, 106});
    CHECK(r.or_correct == doctest::Approx(4.57).epsilon(0.01 / 4.57));
    CHECK(r.or_missing_incorrect == doctest::Approx(0.22).epsilon(0.01 / 0.22));
    CHECK_FALSE(r.haldane_corrected);
  }

  TEST_CASE("balanced table is one") {
    for (std::uint64_t k : {1u, 7u, 300u}) CHECK(odds_ratio({k, k, k, k}).or_correct == doctest::Approx(1.0));
  }

  TEST_CASE("zero cell takes the half correction") {
    const auto r = odds_ratio({10, 0, 5, 5});
    CHECK(r.haldane_corrected);
    CHECK(r.or_correct == doctest::Approx((10.5 * 5.5) / (0.5 * 5.5)));
    CHECK(r.or_missing_incorrect == doctest::Approx((0.5 * 5.5) / (10.5 * 5.5)));
  }

  TEST_CASE("swapping columns inverts the ratio") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
      const std::uint64_t a = 1 + rng() % 100, b = 1 + rng() % 100, c = 1 + rng() % 100, d = 1 + rng() % 100;
      CHECK(odds_ratio({a, b, c, d}).or_correct * odds_ratio({b, a, d, c}).or_correct ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_SUITE("kappa") {
  TEST_CASE("identical non-constant vectors agree perfectly") {
    const std::vector<std::uint8_t> x = {1, 0, 1, 1, 0, 0, 1};
    const auto r = cohen_kappa(x, x);
    REQUIRE(r.kappa);
    CHECK(*r.kappa == doctest::Approx(1.0));
  }

  TEST_CASE("hand computed table") {
    std::vector<std::uint8_t> x, y;
    auto push = [&](std::uint8_t a, std::uint8_t b, int n) {
      for (int i = 0; i < n; ++i) x.push_back(a), y.push_back(b);
    };
    push(1, 1, 20);
    push(1, 0, 5);
    push(0, 1, 10);
    push(0, 0, 15);
    const auto r = cohen_kappa(x, y);
    CHECK(r.observed_agreement == doctest::Approx(0.7));
    CHECK(r.expected_agreement == doctest::Approx(0.5));
    CHECK(*r.kappa == doctest::Approx(0.4));
    CHECK(r.table[1][1] == 20);
    CHECK(r.table[1][0] == 5);
    CHECK(r.table[0][1] == 10);
    CHECK(r.table[0][0] == 15);
    REQUIRE(r.p_value);
    CHECK(*r.p_value > 0);
    CHECK(*r.p_value < 0.01);
  }

  TEST_CASE("both raters constant is undefined") {
    const std::vector<std::uint8_t> zeros(12, 0), ones(12, 1);
    CHECK_FALSE(cohen_kappa(zeros, zeros).kappa);
    CHECK_FALSE(cohen_kappa(ones, zeros).kappa);
    CHECK(format_kappa(cohen_kappa(zeros, zeros).kappa) == "-");
    CHECK(kappa_bucket(cohen_kappa(zeros, zeros).kappa) == KappaBucket::kUndefined);
  }

  TEST_CASE("one constant rater still computes") {
    std::vector<std::uint8_t> x(100, 0), y(100, 0);
    y[3] = 1;
    const auto r = cohen_kappa(x, y);
    REQUIRE(r.kappa);
    CHECK(*r.kappa == doctest::Approx(0.0));
  }

  TEST_CASE("bad input") {
    const std::vector<std::uint8_t> a = {0, 1}, b = {0}, c = {0, 2}, empty;
    CHECK_THROWS_AS((void)cohen_kappa(a, b), Error);
    CHECK_THROWS_AS((void)cohen_kappa(a, c), Error);
    CHECK_THROWS_AS((void)cohen_kappa(empty, empty), Error);
  }

  TEST_CASE("random vectors: oracle, symmetry and relabeling") {
    std::mt19937_64 rng(99);
    int defined = 0;
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 1 + rng() % 60;
      std::vector<std::uint8_t> x(n), y(n);
      const auto bias = rng() % 10;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng() % 10 < bias;
        y[i] = rng() % 4 == 0 ? static_cast<std::uint8_t>(1 - x[i]) : x[i];
      }
      const auto k = cohen_kappa(x, y);
      CHECK(k.kappa.has_value() == cohen_kappa(y, x).kappa.has_value());
      if (!k.kappa) continue;
      ++defined;
      CHECK(std::abs(*k.kappa - kappa_oracle(x, y)) <= 1e-12);
      CHECK(*cohen_kappa(y, x).kappa == doctest::Approx(*k.kappa).epsilon(1e-12));
      std::vector<std::uint8_t> fx(n), fy(n);
      for (std::size_t i = 0; i < n; ++i) fx[i] = 1 - x[i], fy[i] = 1 - y[i];
      CHECK(*cohen_kappa(fx, fy).kappa == doctest::Approx(*k.kappa).epsilon(1e-12));
      CHECK(*k.kappa >= -1.0);
      CHECK(*k.kappa <= 1.0);
      if (k.p_value) {
        CHECK(*k.p_value >= 0);
        CHECK(*k.p_value <= 1);
      }
    }
    CHECK(defined > 800);
  }

  TEST_CASE("buckets") {
    CHECK(kappa_bucket(0.95) == KappaBucket::kAlmostPerfect);
    CHECK(kappa_bucket(0.40) == KappaBucket::kFair);
    CHECK(kappa_bucket(-0.0003) == KappaBucket::kLessThanChance);
    CHECK(kappa_bucket(0.0) == KappaBucket::kLessThanChance);
    CHECK(kappa_bucket(0.01) == KappaBucket::kSlight);
    CHECK(kappa_bucket(0.20) == KappaBucket::kSlight);
    CHECK(kappa_bucket(0.2001) == KappaBucket::kFair);
    CHECK(kappa_bucket(0.60) == KappaBucket::kModerate);
    CHECK(kappa_bucket(0.80) == KappaBucket::kSubstantial);
    CHECK(kappa_bucket(1.0) == KappaBucket::kAlmostPerfect);
    CHECK(kappa_bucket_rank(KappaBucket::kAlmostPerfect) == 5);
    CHECK(kappa_bucket_rank(KappaBucket::kFair) == 2);
    CHECK(kappa_bucket_name(KappaBucket::kLessThanChance) == "less-than-chance");
    CHECK_THROWS_AS((void)kappa_bucket(1.01), Error);
    CHECK_THROWS_AS((void)kappa_bucket(-1.5), Error);
    CHECK_THROWS_AS((void)kappa_bucket(std::nan("")), Error);
  }

  TEST_CASE("bucket is monotone in kappa") {
    int last = -1;
    for (int i = -1000; i <= 1000; ++i) {
      const int rank = kappa_bucket_rank(kappa_bucket(i / 1000.0));
      CHECK(rank >= last);
      last = rank;
    }
  }

  TEST_CASE("formatting") {
    CHECK(format_kappa(0.95) == "0.95");
    CHECK(format_kappa(-0.0003) == "-0.0003");
    CHECK(format_kappa(std::nullopt) == "-");
    CHECK(format_p(0.0004) == "< .001");
    CHECK(format_p(0.0231) == "0.023");
  }

  TEST_CASE("report covers six majors and sixteen minors") {
    core::RaterScoreSheet r1("r1"), r2("r2");
    r1.add("e1", counts_of({{"a.1", 1}, {"c", 2}}));
    r2.add("e1", counts_of({{"a.1", 1}, {"c", 1}}));
    r1.add("e2", counts_of({{"d.3", 1}}));
    r2.add("e2", counts_of({{"d.2", 1}}));
    r1.add("e3", counts_of({{"c", 1}}));
    r2.add("e3", counts_of({}));
    const auto rep = kappa_report(r1, r2);
    CHECK(rep.event_count == 3);
    CHECK(rep.rows.size() == 22);
    std::size_t majors = 0;
    for (const auto& row : rep.rows) majors += row.major;
    CHECK(majors == 6);
    CHECK(rep.rows[0].code == "a");
    CHECK(rep.rows[0].major);
    CHECK(rep.rows[1].code == "a.1");
    const auto text = render_text(rep);
    CHECK(text.find("Vocalization") != std::string::npos);
    CHECK(to_json(rep)["rows"].size() == 22);
  }

  TEST_CASE("report needs matching sheets") {
    core::RaterScoreSheet r1("r1"), r2("r2");
    CHECK_THROWS_AS((void)kappa_report(r1, r2), Error);
    r1.add("e1", counts_of({}));
    r2.add("e2", counts_of({}));
    CHECK_THROWS_AS((void)kappa_report(r1, r2), Error);
  }
}

TEST_SUITE("alignment") {
  TEST_CASE("identical lists are all correct") {
    std::vector<ReferenceEntry> ref = {{"A", 1000}, {"B", 9000}, {"A", 20000}};
    std::vector<CandidateEntry> cand;
    for (const auto& r : ref) cand.push_back({r.behavior_name, r.occurred_at});
    const auto res = align(cand, ref);
    CHECK(res.correct == 3);
    CHECK(res.missing_count() == 0);
    CHECK(res.incorrect == 0);
    CHECK(res.correct_percent() == doctest::Approx(100.0));
  }

  TEST_CASE("empty candidate list leaves the reference missing") {
    const auto res = align({}, {{"A", 1000}});
    CHECK(res.missing_count() == 1);
    CHECK(res.correct == 0);
  }

  TEST_CASE("wrong name inside the window is incorrect, not missing") {
    const auto res = align({{"A", 10'000}}, {{"B", 12'000}}, 5000);
    CHECK(res.incorrect == 1);
    CHECK(res.missing_count() == 0);
    REQUIRE(res.candidates[0].reference);
    CHECK(res.candidates[0].label == AlignmentLabel::kIncorrect);
  }

  TEST_CASE("candidate outside the window is incorrect and the reference missing") {
    const auto res = align({{"A", 10'000}}, {{"A", 16'000}}, 5000);
    CHECK(res.incorrect == 1);
    CHECK(res.missing_count() == 1);
    CHECK_FALSE(res.candidates[0].reference);
  }

  TEST_CASE("tolerance must be positive and reference sorted") {
    CHECK_THROWS_AS((void)align({}, {}, 0), Error);
    CHECK_THROWS_AS((void)align({}, {{"A", 5}, {"A", 1}}), Error);
  }

  TEST_CASE("small random lists agree with the brute-force oracle") {
    std::mt19937_64 rng(314);
    for (int t = 0; t < 20'000; ++t) {
      const auto l = random_lists(rng, 5);
      const TimestampMs tol = 500 + static_cast<TimestampMs>(rng() % 6000);
      const auto res = align(l.cand, l.ref, tol);
      const auto oracle = alignment_oracle(l.cand, l.ref, tol);
      CHECK(res.correct == oracle.correct);
      CHECK(res.incorrect == oracle.incorrect);
      CHECK(res.missing_count() == oracle.missing);
      CHECK(res.correct + res.incorrect == l.cand.size());
      CHECK(res.correct <= std::min(l.cand.size(), l.ref.size()));
      CHECK(res.correct <= max_same_name_pairs(l.cand, l.ref, tol));
    }
  }

  TEST_CASE("shrinking the tolerance never adds correct entries") {
    std::mt19937_64 rng(2718);
    for (int t = 0; t < 5000; ++t) {
      const auto l = random_lists(rng, 8);
      std::size_t last = 0;
      for (TimestampMs tol = 100; tol <= 12'000; tol += 400) {
        const auto c = align(l.cand, l.ref, tol).correct;
        CHECK(c >= last);
        last = c;
      }
    }
  }

  TEST_CASE("exact copies are all correct at any tolerance") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 500; ++t) {
      auto l = random_lists(rng, 30);
      l.cand.clear();
      for (const auto& r : l.ref) l.cand.push_back({r.behavior_name, r.occurred_at});
      std::shuffle(l.cand.begin(), l.cand.end(), rng);
      CHECK(align(l.cand, l.ref, 1 + static_cast<TimestampMs>(rng() % 10'000)).correct == l.ref.size());
    }
  }

  TEST_CASE("contingency from two alignments") {
    const std::vector<ReferenceEntry> ref = {{"A", 0}, {"B", 10'000}, {"C", 20'000}};
    const auto first = align({{"A", 0}, {"B", 10'000}, {"C", 20'000}}, ref);
    const auto second = align({{"A", 0}, {"X", 10'000}}, ref);
    const auto t = contingency_from_alignment(first, second);
    CHECK(t == ContingencyTable2x2{3, 0, 1, 2});
  }

  TEST_CASE("comparison report") {
    const std::vector<ReferenceEntry> ref = {{"A", 0}, {"B", 10'000}, {"C", 20'000}, {"A", 30'000}};
    const auto cmp = compare_alignment("app", {{"A", 0}, {"B", 10'000}, {"C", 20'000}}, "manual",
                                       {{"A", 1000}}, ref);
    CHECK(cmp.table == ContingencyTable2x2{3, 1, 1, 3});
    const auto j = to_json(cmp);
    CHECK(j["methods"][0]["method"] == "app");
    CHECK(j["table"]["a"] == 3);
    CHECK(render_text(cmp).find("manual") != std::string::npos);

    const auto degenerate = compare_alignment("x", {}, "y", {}, ref);
    CHECK_FALSE(degenerate.chi_square);
    CHECK_FALSE(degenerate.chi_square_error.empty());
  }

  TEST_CASE("reading inputs") {
    testing::TempDir dir;
    core::write_text_file(dir / "ref.jsonl",
                          "{\"behavior_name\":\"B\",\"occurred_at\":20}\n{\"behavior_name\":\"A\",\"occurred_at\":10}\n");
    const auto ref = read_reference(dir / "ref.jsonl");
    REQUIRE(ref.size() == 2);
    CHECK(ref[0].behavior_name == "A");
    core::write_text_file(dir / "cand.jsonl",
                          "{\"format\":\"expresslog-events\",\"version\":1,\"session_id\":\"s\"}\n"
                          "{\"behavior_name\":\"A\",\"clicked_at\":11}\n{\"behavior_name\":\"B\",\"at\":21}\n");
    CHECK(read_candidates(dir / "cand.jsonl").size() == 2);
    core::write_text_file(dir / "bad.jsonl", "{\"behavior_name\":\"A\",\"at\":\"soon\"}\n");
    try {
      (void)read_candidates(dir / "bad.jsonl");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
      CHECK(std::string(e.what()).find("bad.jsonl:1") != std::string::npos);
    }
  }
}

TEST_SUITE("completeness") {
  TEST_CASE("all present is 100 everywhere") {
    std::vector<core::DataRecord> records(4, record_with({}));
    const auto audit = completeness_audit(records);
    for (const auto& t : audit.types) CHECK(t.percent == doctest::Approx(100.0));
    for (const auto& s : audit.sources) CHECK(s.mean_percent == doctest::Approx(100.0));
  }

  TEST_CASE("seven of ten") {
    std::vector<core::DataRecord> records;
    for (int i = 0; i < 7; ++i) records.push_back(record_with({}));
    for (int i = 0; i < 3; ++i) records.push_back(record_with({"A14"}));
    const auto audit = completeness_audit(records);
    CHECK(audit.type("A14").count == 7);
    CHECK(audit.type("A14").percent == doctest::Approx(70.0));
    CHECK(audit.type("A13").percent == doctest::Approx(100.0));
    CHECK_THROWS_AS((void)audit.type("Z9"), Error);
  }

  TEST_CASE("empty input is an error") {
    try {
      (void)completeness_audit({});
      FAIL("expected invalid argument");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidArgument);
    }
  }

  TEST_CASE("random loss keeps percents bounded and means consistent") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t) {
      std::vector<core::DataRecord> records;
      const std::size_t n = 1 + rng() % 40;
      for (std::size_t i = 0; i < n; ++i) {
        auto r = record_with({});
        for (auto& s : r.slots) {
          if (rng() % 4 == 0) s = core::Slot::error(core::SlotError::kFieldMissing);
        }
        records.push_back(std::move(r));
      }
      const auto audit = completeness_audit(records);
      CHECK(audit.record_count == n);
      for (const auto& src : audit.sources) {
        double sum = 0, count_sum = 0;
        for (const auto& t : audit.types) {
          CHECK(t.percent >= 0);
          CHECK(t.percent <= 100);
          if (t.source == src.source) sum += t.percent, count_sum += static_cast<double>(t.count);
        }
        CHECK(src.mean_percent == doctest::Approx(sum / static_cast<double>(src.type_count)));
        CHECK(src.mean_count == doctest::Approx(count_sum / static_cast<double>(src.type_count)));
      }
    }
  }

  TEST_CASE("records without any value are dropped") {
    auto empty = record_with({});
    for (auto& s : empty.slots) s = core::Slot::error(core::SlotError::kSourceUnavailable);
    const auto f = drop_empty_records({record_with({}), empty, record_with({"iB1"})});
    CHECK(f.kept.size() == 2);
    CHECK(f.dropped == 1);
  }

  TEST_CASE("report text and json") {
    std::vector<core::DataRecord> records(2, record_with({"S1"}));
    const auto audit = completeness_audit(records);
    CHECK(to_json(audit, 1)["dropped_empty_records"] == 1);
    CHECK(render_text(audit, 1).find("S1") != std::string::npos);
  }
}

TEST_SUITE("frequency") {
  TEST_CASE("empty sheet is all zeros") {
    const auto t = frequency_table(core::RaterScoreSheet("c"));
    CHECK(t.grand_total == 0);
    for (const auto& row : t.keys) {
      CHECK(row.count == 0);
      CHECK(row.percent == 0);
    }
  }

  TEST_CASE("one event") {
    core::RaterScoreSheet s("c");
    s.add("e1", counts_of({{"d.3", 2}, {"c", 1}}));
    const auto t = frequency_table(s);
    CHECK(t.grand_total == 3);
    CHECK(t.majors[3].code == "d");
    CHECK(t.majors[3].count == 2);
    CHECK(t.majors[3].percent == doctest::Approx(200.0 / 3));
    CHECK(t.majors[2].count == 1);
    CHECK(t.majors[2].percent == doctest::Approx(100.0 / 3));
    CHECK(fmt::format("{:.1f}", t.majors[3].percent) == "66.7");
  }

  TEST_CASE("majors are sums of minors and percents total 100") {
    std::mt19937_64 rng(3);
    core::RaterScoreSheet s("c");
    for (int e = 0; e < 100; ++e) {
      core::MovementCounts c{};
      for (auto& v : c) v = static_cast<std::uint32_t>(rng() % 3);
      s.add("e" + std::to_string(e), c);
    }
    const auto t = frequency_table(s);
    double total = 0;
    for (const auto& major : t.majors) {
      std::uint64_t sum = 0;
      for (const auto& key : t.keys) {
        if (key.code.substr(0, 1) == major.code) sum += key.count;
      }
      CHECK(major.count == sum);
      total += major.percent;
    }
    CHECK(total == doctest::Approx(100.0).epsilon(0.001));
    CHECK(render_text(t).find("total") != std::string::npos);
    CHECK(to_json(t)["grand_total"] == t.grand_total);
  }

  TEST_CASE("consensus") {
    core::RaterScoreSheet r1("r1"), r2("r2");
    r1.add("e1", counts_of({{"a.1", 1}}));
    r2.add("e1", counts_of({{"a.1", 1}}));
    r1.add("e2", counts_of({{"b.1", 1}}));
    r2.add("e2", counts_of({{"b.2", 1}}));
    r1.add("e3", counts_of({{"c", 1}}));
    r2.add("e3", counts_of({{"c", 2}}));

    try {
      (void)consensus_merge(r1, r2, {});
      FAIL("expected invalid argument");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidArgument);
      const std::string msg = e.what();
      CHECK(msg.find("e2") != std::string::npos);
      CHECK(msg.find("e3") != std::string::npos);
      CHECK(msg.find("e1") == std::string::npos);
    }

    std::map<std::string, core::MovementCounts, std::less<>> res = {
        {"e2", counts_of({{"b.2", 1}})}, {"e3", counts_of({{"c", 2}})}};
    const auto merged = consensus_merge(r1, r2, res);
    CHECK(merged.rater_id() == "consensus");
    CHECK(merged.counts("e1") == r1.counts("e1"));
    CHECK(merged.counts("e2") == counts_of({{"b.2", 1}}));
    CHECK(merged.counts("e3") == counts_of({{"c", 2}}));
  }

  TEST_CASE("identical sheets merge to themselves") {
    core::RaterScoreSheet r1("r1");
    r1.add("e1", counts_of({{"f.2", 1}}));
    r1.add("e2", counts_of({{"e.1", 3}}));
    const auto merged = consensus_merge(r1, r1, {}, "final");
    CHECK(merged.entries() == r1.entries());
  }
}
