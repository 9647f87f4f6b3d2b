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

#include "sim/simulate.hpp"

#include <set>

#include <fmt/format.h>
#include <httplib.h>

#include "capture/capture_service.hpp"
#include "core/error.hpp"
#include "sim/live_feed.hpp"
#include "store/record_store.hpp"

namespace exl::sim {

namespace {

constexpr std::size_t kMaxFinalDrains = 10'000;

std::string fetch_store_text(const std::string& url, const std::string& session_id) {
  httplib::Client client(url);
  client.set_read_timeout(10, 0);
  auto res = client.Get("/records", httplib::Params{{"session_id", session_id}}, httplib::Headers{});
  if (!res || res->status != 200) {
    throw Error(ErrorCode::kUnavailable, "cannot read records back from store at " + url);
  }
  return res->body;
}

}  // namespace

capture::DeliveryResult GatedStoreClient::deliver(const core::DataRecord& record) {
  ++deliveries_;
  if (!open_()) return {capture::DeliveryOutcome::kUnreachable, std::nullopt, "store outage"};
  return inner_.deliver(record);
}

SimulationResult run_simulation(ScenarioConfig sc, const SimulationOptions& options) {
  if (options.seed) sc.seed = *options.seed;
  if (options.freshness_window_ms) sc.freshness_window_ms = *options.freshness_window_ms;
  if (options.weather) sc.weather = *options.weather;
  sc.validate();

  ManualClock clock(sc.start_ms);
  store::RecordStore local_store(clock);
  capture::LocalStoreLink local_link(local_store);
  std::unique_ptr<capture::HttpStoreClient> http_link;
  capture::StoreClient* link = &local_link;
  if (options.store_url) {
    http_link = std::make_unique<capture::HttpStoreClient>(*options.store_url);
    link = http_link.get();
  }
  GatedStoreClient gated(*link, [&] {
    return !sc.outage(FaultTarget::kStore, clock.now_ms() - sc.start_ms);
  });

  sensors::SourceCells cells;
  capture::CaptureConfig cfg;
  cfg.device_id = sc.device_id;
  cfg.freshness_window_ms = sc.freshness_window_ms;
  capture::CaptureService service(clock, cells, gated, sc.registry, cfg);

  SourceSampler sampler(sc, cells);

  SimulationResult res;
  const auto session = service.start_session(sc.location_label);
  res.session_id = session.session_id;
  for (std::size_t i = 0; i < sc.clicks.size(); ++i) {
    const auto& click = sc.clicks[i];
    clock.set(sc.start_ms + click.at_ms);
    sampler.sample(i, click.at_ms);
    service.record_behavior(session.session_id, click.behavior_name,
                            click.category_name
                                ? std::optional<std::string_view>(*click.category_name)
                                : std::nullopt);
    service.drain();
  }
  service.end_session();

  for (std::size_t n = 0; n < kMaxFinalDrains; ++n) {
    auto due = service.queue().next_due();
    if (!due) break;
    clock.set(std::max(clock.now_ms(), *due));
    service.drain();
  }

  const auto counts = service.queue().counts();
  res.clicks = sc.clicks.size();
  res.acked = counts.acked;
  res.failed = counts.failed;
  res.pending = counts.pending;
  res.records = service.log().records(session.session_id);
  res.events_text = service.export_log(session.session_id);

  auto read_store = [&] {
    return options.store_url ? fetch_store_text(*options.store_url, session.session_id)
                             : local_store.dump_text();
  };
  auto count_store = [&](const std::string& text) {
    std::set<std::string> ids;
    std::size_t lines = 0;
    core::for_each_jsonl_text(text, "store", [&](const core::Json& j, std::size_t) {
      ++lines;
      ids.insert(j.at("record").at("event_id").get<std::string>());
    });
    return std::pair{lines, ids.size()};
  };
  res.store_text = read_store();
  std::tie(res.store_count, res.distinct_store_event_ids) = count_store(res.store_text);
  res.replay_mismatches = service.replay_acked();
  res.store_count_after_replay = count_store(read_store()).first;
  res.deliveries = gated.deliveries();

  for (core::Source source : core::kAllSources) {
    auto& loss = res.loss[static_cast<std::size_t>(source)];
    loss.source = source;
    const auto range = core::source_range(source);
    for (const auto& r : res.records) {
      const std::size_t values = r.value_count(source);
      loss.value_slots += values;
      loss.error_slots += range.count - values;
      if (values < range.count) ++loss.records_missing;
    }
  }

  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    core::write_text_file(options.out_dir / "events.jsonl", res.events_text);
    core::write_text_file(options.out_dir / "store.jsonl", res.store_text);
    core::write_text_file(options.out_dir / "loss_summary.json",
                          loss_summary_json(res, sc).dump(2) + "\n");
    core::write_text_file(options.out_dir / "loss_summary.txt", loss_summary_text(res, sc));
  }
  return res;
}

core::Json loss_summary_json(const SimulationResult& res, const ScenarioConfig& sc) {
  core::Json j = core::Json::object();
  j["scenario"] = sc.name;
  j["seed"] = sc.seed;
  j["session_id"] = res.session_id;
  j["clicks"] = res.clicks;
  j["log_records"] = res.records.size();
  core::Json sources = core::Json::array();
  for (const auto& l : res.loss) {
    const auto slots = l.value_slots + l.error_slots;
    sources.push_back({{"source", std::string(core::source_name(l.source))},
                       {"records_missing", l.records_missing},
                       {"value_slots", l.value_slots},
                       {"error_slots", l.error_slots},
                       {"completeness_percent",
                        slots ? 100.0 * static_cast<double>(l.value_slots) / slots : 0.0}});
  }
  j["sources"] = std::move(sources);
  j["sync"] = {{"acked", res.acked},
               {"failed", res.failed},
               {"pending", res.pending},
               {"deliveries", res.deliveries},
               {"store_records", res.store_count},
               {"store_distinct_event_ids", res.distinct_store_event_ids},
               {"replay_mismatches", res.replay_mismatches},
               {"store_records_after_replay", res.store_count_after_replay}};
  return j;
}

std::string loss_summary_text(const SimulationResult& res, const ScenarioConfig& sc) {
  std::string out = fmt::format("scenario {} (seed {}), session {}\n", sc.name, sc.seed,
                                res.session_id);
  out += fmt::format("{} clicks, {} records logged\n\n", res.clicks, res.records.size());
  out += fmt::format("{:<13}{:>17}{:>13}{:>13}\n", "source", "records missing", "value slots",
                     "error slots");
  for (const auto& l : res.loss) {
    out += fmt::format("{:<13}{:>17}{:>13}{:>13}\n", core::source_name(l.source), l.records_missing,
                       l.value_slots, l.error_slots);
  }
  out += fmt::format("\nsync: {} acked, {} failed, {} pending, {} deliveries\n", res.acked,
                     res.failed, res.pending, res.deliveries);
  out += fmt::format("store: {} records, {} distinct event ids, {} after replay\n", res.store_count,
                     res.distinct_store_event_ids, res.store_count_after_replay);
  return out;
}

}  // namespace exl::sim
