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

#include <fstream>
#include <random>
#include <set>
#include <thread>

#include <httplib.h>

#include "core/error.hpp"
#include "store/record_store.hpp"
#include "store/store_http.hpp"
#include "support/test_support.hpp"

using namespace exl;
using namespace exl::store;
using namespace std::chrono_literals;

namespace {

core::DataRecord make_record(const std::string& event_id, const std::string& session = "s1",
                             const std::string& behavior = "Goodbye", TimestampMs at = 1000) {
  return core::flatten_record(event_id, session, {1, behavior, "Social"}, at,
                              testing::full_snapshot(at));
}

std::vector<std::string> event_ids(const std::vector<StoredRecord>& records) {
  std::vector<std::string> out;
  for (const auto& r : records) out.push_back(r.record.event_id);
  return out;
}

}  // namespace

TEST_SUITE("record store") {
  TEST_CASE("first record gets sequence 1") {
    ManualClock clock(500);
    RecordStore store(clock);
    const auto ack = store.put_record(make_record("e1"));
    CHECK(ack == Ack{"e1", 1});
    CHECK(store.query().at(0).received_at == 500);
  }

  TEST_CASE("repeat put returns the original ack and stores nothing") {
    ManualClock clock;
    RecordStore store(clock);
    const auto first = store.put_record(make_record("e1"));
    store.put_record(make_record("e2"));
    auto changed = make_record("e1");
    changed.behavior_name = "Hungry";
    CHECK(store.put_record(make_record("e1")) == first);
    CHECK(store.put_record(changed) == first);
    CHECK(store.size() == 2);
    CHECK(store.query()[0].record.behavior_name == "Goodbye");
  }

  TEST_CASE("record with a missing slot is rejected by name") {
    ManualClock clock;
    RecordStore store(clock);
    auto j = core::encode_record(make_record("e1"));
    j.erase("S5");
    try {
      store.put_json(j);
      FAIL("expected a schema error");
    } catch (const SchemaError& e) {
      REQUIRE(e.diagnostics().size() == 1);
      CHECK(e.diagnostics()[0].find("S5") != std::string::npos);
    }
    CHECK(store.size() == 0);
  }

  TEST_CASE("queries filter and keep sequence order") {
    ManualClock clock;
    RecordStore store(clock);
    CHECK(store.query().empty());
    store.put_record(make_record("e1", "s1", "Goodbye", 100));
    store.put_record(make_record("e2", "s2", "Hungry", 200));
    store.put_record(make_record("e3", "s1", "Hungry", 300));
    store.put_record(make_record("e4", "s2", "Goodbye", 400));
    store.put_record(make_record("e5", "s1", "Goodbye", 500));
    CHECK(event_ids(store.query()) == std::vector<std::string>{"e1", "e2", "e3", "e4", "e5"});

    RecordFilter by_session;
    by_session.session_id = "s1";
    CHECK(event_ids(store.query(by_session)) == std::vector<std::string>{"e1", "e3", "e5"});

    RecordFilter combined;
    combined.behavior_name = "Goodbye";
    combined.from_ms = 150;
    combined.to_ms = 500;
    CHECK(event_ids(store.query(combined)) == std::vector<std::string>{"e4", "e5"});
  }

  TEST_CASE("random puts: cardinality equals distinct ids, sequences strictly increase") {
    std::mt19937_64 rng(31);
    ManualClock clock;
    RecordStore store(clock);
    std::set<std::string> ids;
    for (int i = 0; i < 400; ++i) {
      const std::string id = "e" + std::to_string(rng() % 120);
      const auto ack = store.put_record(make_record(id));
      ids.insert(id);
      CHECK(store.ack_for(id) == ack);
      // Read-your-writes.
      RecordFilter f;
      CHECK(event_ids(store.query(f)).back() == store.query().back().record.event_id);
    }
    CHECK(store.size() == ids.size());
    const auto all = store.query();
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i].sequence == i + 1);
  }

  TEST_CASE("concurrent writers get one sequence per event") {
    ManualClock clock;
    RecordStore store(clock);
    std::vector<std::thread> writers;
    std::vector<std::vector<Ack>> acks(4);
    for (int w = 0; w < 4; ++w) {
      writers.emplace_back([&, w] {
        for (int i = 0; i < 200; ++i) {
          acks[w].push_back(store.put_record(make_record("e" + std::to_string(i))));
        }
      });
    }
    for (auto& t : writers) t.join();
    CHECK(store.size() == 200);
    for (int i = 0; i < 200; ++i) {
      for (int w = 1; w < 4; ++w) CHECK(acks[w][i] == acks[0][i]);
    }
  }

  TEST_CASE("log is replayed on open") {
    testing::TempDir dir;
    ManualClock clock(10);
    {
      RecordStore store(clock, dir / "store.jsonl");
      store.put_record(make_record("e1"));
      store.put_record(make_record("e2"));
    }
    RecordStore reopened(clock, dir / "store.jsonl");
    CHECK(reopened.size() == 2);
    CHECK(reopened.put_record(make_record("e1")) == Ack{"e1", 1});
    CHECK(reopened.put_record(make_record("e3")) == Ack{"e3", 3});
    CHECK(reopened.dump_text() == core::read_text_file(dir / "store.jsonl"));
  }

  TEST_CASE("a torn final line is dropped on open") {
    testing::TempDir dir;
    ManualClock clock;
    {
      RecordStore store(clock, dir / "store.jsonl");
      store.put_record(make_record("e1"));
    }
    {
      std::ofstream out(dir / "store.jsonl", std::ios::app);
      out << "{\"sequence\":2,\"received_at\":0,\"rec";
    }
    RecordStore reopened(clock, dir / "store.jsonl");
    CHECK(reopened.size() == 1);
    CHECK(reopened.put_record(make_record("e2")).sequence == 2);
    RecordStore again(clock, dir / "store.jsonl");
    CHECK(again.size() == 2);
  }

  TEST_CASE("a corrupt middle line is a parse error with its line number") {
    testing::TempDir dir;
    core::write_text_file(dir / "store.jsonl", "not json\n");
    ManualClock clock;
    try {
      RecordStore store(clock, dir / "store.jsonl");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kParse);
      CHECK(std::string(e.what()).find(":1") != std::string::npos);
    }
  }
}

TEST_SUITE("change feed") {
  TEST_CASE("from zero replays earlier records, then tails") {
    ManualClock clock;
    RecordStore store(clock);
    store.put_record(make_record("e1"));
    store.put_record(make_record("e2"));
    ChangeFeed feed(store, 0);
    CHECK(event_ids(feed.poll(0ms)) == std::vector<std::string>{"e1", "e2"});
    std::thread writer([&] {
      std::this_thread::sleep_for(50ms);
      store.put_record(make_record("e3"));
    });
    CHECK(event_ids(feed.poll(2000ms)) == std::vector<std::string>{"e3"});
    writer.join();
    CHECK(feed.cursor() == 3);
  }

  TEST_CASE("from latest sees only future records") {
    ManualClock clock;
    RecordStore store(clock);
    store.put_record(make_record("e1"));
    ChangeFeed feed(store, store.latest_sequence());
    CHECK(feed.poll(10ms).empty());
    store.put_record(make_record("e2"));
    CHECK(event_ids(feed.poll(0ms)) == std::vector<std::string>{"e2"});
  }

  TEST_CASE("reconnecting at the last seen sequence leaves no gap") {
    ManualClock clock;
    RecordStore store(clock);
    for (int i = 1; i <= 10; ++i) store.put_record(make_record("e" + std::to_string(i)));
    ChangeFeed first(store, 0);
    const auto part = first.poll(0ms, 4);
    CHECK(part.size() == 4);
    ChangeFeed resumed(store, part.back().sequence);
    const auto rest = resumed.poll(0ms);
    CHECK(rest.front().sequence == 5);
    CHECK(rest.size() == 6);
  }

  TEST_CASE("feed from zero equals an unfiltered query") {
    ManualClock clock;
    RecordStore store(clock);
    for (int i = 0; i < 25; ++i) store.put_record(make_record("e" + std::to_string(i % 17)));
    ChangeFeed feed(store, 0);
    std::vector<StoredRecord> seen;
    for (;;) {
      auto batch = feed.poll(0ms, 4);
      if (batch.empty()) break;
      seen.insert(seen.end(), batch.begin(), batch.end());
    }
    CHECK(event_ids(seen) == event_ids(store.query()));
  }

  TEST_CASE("closing the store releases waiters") {
    ManualClock clock;
    RecordStore store(clock);
    std::thread closer([&] {
      std::this_thread::sleep_for(50ms);
      store.close();
    });
    const auto t0 = std::chrono::steady_clock::now();
    CHECK_FALSE(store.wait_beyond(0, 5000ms));
    CHECK(std::chrono::steady_clock::now() - t0 < 4000ms);
    closer.join();
  }
}

TEST_SUITE("store http") {
  TEST_CASE("post, query, feed and health") {
    ManualClock clock;
    RecordStore store(clock);
    StoreHttpServer server(store);
    const int port = server.start("127.0.0.1", 0);
    httplib::Client client("127.0.0.1", port);

    const auto line = core::record_line(make_record("e1", "s1"));
    auto res = client.Post("/records", line, "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(core::Json::parse(res->body) == core::Json::parse(R"({"event_id":"e1","sequence":1})"));
    res = client.Post("/records", line, "application/json");
    CHECK(core::Json::parse(res->body)["sequence"] == 1);
    client.Post("/records", core::record_line(make_record("e2", "s2")), "application/json");

    auto bad = core::encode_record(make_record("e3"));
    bad.erase("GPS1");
    res = client.Post("/records", bad.dump(), "application/json");
    CHECK(res->status == 422);
    CHECK(core::Json::parse(res->body)["diagnostics"][0].get<std::string>().find("GPS1") !=
          std::string::npos);
    res = client.Post("/records", "{oops", "application/json");
    CHECK(res->status == 400);

    res = client.Get("/records?session_id=s2");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == encode_stored(store.query()[1]).dump() + "\n");
    CHECK(client.Get("/records?from=abc")->status == 400);

    res = client.Get("/feed?from_sequence=1");
    CHECK(res->body == encode_stored(store.query()[1]).dump() + "\n");
    CHECK(client.Get("/feed?from_sequence=-1")->status == 400);

    std::thread late([&] {
      std::this_thread::sleep_for(100ms);
      store.put_record(make_record("e4"));
    });
    res = client.Get("/feed?from_sequence=2&timeout_ms=5000");
    late.join();
    CHECK(core::Json::parse(res->body)["record"]["event_id"] == "e4");

    res = client.Get("/health");
    CHECK(core::Json::parse(res->body)["count"] == 3);
    server.stop();
  }

  TEST_CASE("stop is prompt with a parked long-poll") {
    ManualClock clock;
    RecordStore store(clock);
    StoreHttpServer server(store);
    const int port = server.start("127.0.0.1", 0);
    std::thread poller([&] {
      httplib::Client client("127.0.0.1", port);
      client.Get("/feed?from_sequence=0&timeout_ms=20000");
    });
    std::this_thread::sleep_for(100ms);
    const auto t0 = std::chrono::steady_clock::now();
    server.stop();
    poller.join();
    CHECK(std::chrono::steady_clock::now() - t0 < 5s);
  }
}
