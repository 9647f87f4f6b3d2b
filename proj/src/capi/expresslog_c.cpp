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

#include "expresslog/expresslog.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "analysis/report.hpp"
#include "capture/capture_http.hpp"
#include "capture/capture_service.hpp"
#include "core/codec.hpp"
#include "core/error.hpp"
#include "core/registry.hpp"
#include "sim/fixtures.hpp"
#include "sim/live_feed.hpp"
#include "sim/reproduce.hpp"
#include "sim/simulate.hpp"
#include "store/record_store.hpp"
#include "store/store_http.hpp"

using exl::Error;
using exl::ErrorCode;
using exl::core::Json;

struct exl_store {
  exl::SystemClock clock;
  std::unique_ptr<exl::store::RecordStore> store;
  std::unique_ptr<exl::store::StoreHttpServer> server;
};

struct exl_capture {
  exl::SystemClock clock;
  exl::sensors::SourceCells cells;
  std::unique_ptr<exl::store::RecordStore> local_store;
  std::unique_ptr<exl::capture::StoreClient> link;
  std::unique_ptr<exl::sim::LiveSensorFeed> feed;
  std::unique_ptr<exl::capture::CaptureService> service;
  std::unique_ptr<exl::capture::CaptureHttpServer> server;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

exl_status fail(exl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
exl_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return EXL_OK;
  } catch (const exl::SchemaError& e) {
    std::string msg = e.what();
    for (const auto& d : e.diagnostics()) msg += "\n  " + d;
    return fail(static_cast<exl_status>(e.code()), msg);
  } catch (const Error& e) {
    return fail(static_cast<exl_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(EXL_ERR_PARSE, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(EXL_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(EXL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EXL_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

Json parse_json_arg(const char* text, const char* what) {
  if (!text || !*text) return Json::object();
  try {
    Json j = Json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + ": expected an object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
  }
}

template <typename T>
std::optional<T> opt(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

std::filesystem::path data_dir_or_default(const char* data_dir) {
  return data_dir && *data_dir ? std::filesystem::path(data_dir) : std::filesystem::path(EXL_DATA_DIR);
}

std::filesystem::path path_or(const Json& inputs, const char* key, const std::filesystem::path& fallback) {
  auto v = opt<std::string>(inputs, key);
  return v ? std::filesystem::path(*v) : fallback;
}

std::string stored_ndjson(const std::vector<exl::store::StoredRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += exl::store::encode_stored(r).dump();
    out += '\n';
  }
  return out;
}

}  // namespace

extern "C" {

void exl_string_free(char* s) { std::free(s); }

const char* exl_status_name(exl_status status) {
  if (status == EXL_OK) return "ok";
  return exl::error_code_name(static_cast<ErrorCode>(status));
}

const char* exl_last_error(void) { return g_last_error.c_str(); }

const char* exl_version(void) { return "0.1.0"; }

const char* exl_default_data_dir(void) { return EXL_DATA_DIR; }

exl_status exl_chi_square_2x2(uint64_t a, uint64_t b, uint64_t c, uint64_t d, int yates,
                              double* chi2, double* p_value) {
  return guarded([&] {
    require(chi2 && p_value, "chi2 and p_value are required");
    const auto r = exl::analysis::chi_square_2x2({a, b, c, d}, yates != 0);
    *chi2 = r.chi2;
    *p_value = r.p_value;
  });
}

exl_status exl_odds_ratio(uint64_t a, uint64_t b, uint64_t c, uint64_t d, double* or_correct,
                          double* or_missing_incorrect, int* haldane_corrected) {
  return guarded([&] {
    require(or_correct && or_missing_incorrect, "odds ratio outputs are required");
    const auto r = exl::analysis::odds_ratio({a, b, c, d});
    *or_correct = r.or_correct;
    *or_missing_incorrect = r.or_missing_incorrect;
    if (haldane_corrected) *haldane_corrected = r.haldane_corrected ? 1 : 0;
  });
}

exl_status exl_cohen_kappa(const uint8_t* first, const uint8_t* second, size_t n, double* kappa,
                           double* p_value) {
  return guarded([&] {
    require(kappa, "kappa output is required");
    require(n == 0 || (first && second), "score vectors are required");
    const auto r = exl::analysis::cohen_kappa({first, n}, {second, n});
    if (!r.kappa) throw Error(ErrorCode::kUndefined, "kappa is undefined: expected agreement is 1");
    *kappa = *r.kappa;
    if (p_value) *p_value = r.p_value.value_or(1.0);
  });
}

exl_status exl_kappa_bucket(double kappa, const char** name) {
  return guarded([&] {
    require(name, "name output is required");
    *name = exl::analysis::kappa_bucket_name(exl::analysis::kappa_bucket(kappa)).data();
  });
}

exl_status exl_registry_default(char** registry_json) {
  return guarded([&] {
    require(registry_json, "output is required");
    *registry_json = dup_string(exl::core::encode_registry(exl::core::default_registry()).dump());
  });
}

exl_status exl_registry_upsert(const char* registry_json, const char* definition_json,
                               char** out_json) {
  return guarded([&] {
    require(registry_json && definition_json && out_json, "registry, definition and output are required");
    const Json doc = parse_json_arg(registry_json, "registry");
    const auto registry = exl::core::BehaviorRegistry::from_definitions(
        exl::core::decode_definitions(doc), opt<std::uint64_t>(doc, "revision").value_or(0));
    const auto def = exl::core::decode_definition(parse_json_arg(definition_json, "definition"));
    *out_json = dup_string(exl::core::encode_registry(exl::core::registry_upsert(registry, def)).dump());
  });
}

exl_status exl_store_open(const char* log_path, exl_store** out) {
  return guarded([&] {
    require(out, "output handle is required");
    auto handle = std::make_unique<exl_store>();
    handle->store = std::make_unique<exl::store::RecordStore>(
        handle->clock, log_path ? std::filesystem::path(log_path) : std::filesystem::path());
    *out = handle.release();
  });
}

void exl_store_close(exl_store* store) {
  if (!store) return;
  if (store->server) store->server->stop();
  store->store->close();
  delete store;
}

exl_status exl_store_put(exl_store* store, const char* record_json, char** ack_json) {
  return guarded([&] {
    require(store && record_json, "store and record are required");
    Json j;
    try {
      j = Json::parse(record_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParse, e.what());
    }
    const auto ack = store->store->put_json(j);
    if (ack_json) *ack_json = dup_string(exl::store::encode_ack(ack).dump());
  });
}

exl_status exl_store_query(exl_store* store, const char* filter_json, char** ndjson) {
  return guarded([&] {
    require(store && ndjson, "store and output are required");
    const Json f = parse_json_arg(filter_json, "filter");
    exl::store::RecordFilter filter;
    filter.session_id = opt<std::string>(f, "session_id");
    filter.behavior_name = opt<std::string>(f, "behavior_name");
    filter.from_ms = opt<exl::TimestampMs>(f, "from_ms");
    filter.to_ms = opt<exl::TimestampMs>(f, "to_ms");
    *ndjson = dup_string(stored_ndjson(store->store->query(filter)));
  });
}

exl_status exl_store_size(exl_store* store, size_t* count) {
  return guarded([&] {
    require(store && count, "store and output are required");
    *count = store->store->size();
  });
}

exl_status exl_store_serve(exl_store* store, const char* host, int port, int* bound_port) {
  return guarded([&] {
    require(store, "store is required");
    if (store->server) throw Error(ErrorCode::kState, "store is already serving");
    auto server = std::make_unique<exl::store::StoreHttpServer>(*store->store);
    const int bound = server->start(host ? host : "127.0.0.1", port);
    store->server = std::move(server);
    if (bound_port) *bound_port = bound;
  });
}

exl_status exl_store_stop(exl_store* store) {
  return guarded([&] {
    require(store, "store is required");
    if (store->server) store->server->stop();
    store->server.reset();
  });
}

exl_status exl_capture_open(const char* config_json, exl_capture** out) {
  return guarded([&] {
    require(out, "output handle is required");
    const Json cfg = parse_json_arg(config_json, "config");
    auto handle = std::make_unique<exl_capture>();

    if (auto url = opt<std::string>(cfg, "store_url")) {
      handle->link = std::make_unique<exl::capture::HttpStoreClient>(*url);
    } else {
      handle->local_store = std::make_unique<exl::store::RecordStore>(
          handle->clock, path_or(cfg, "store_log", {}));
      handle->link = std::make_unique<exl::capture::LocalStoreLink>(*handle->local_store);
    }

    const auto data_dir = std::filesystem::path(EXL_DATA_DIR);
    auto scenario = exl::sim::load_scenario(
        path_or(cfg, "scenario", data_dir / "scenarios" / "ten_clicks.json"));
    scenario.faults.clear();
    if (auto mode = opt<std::string>(cfg, "weather_mode")) {
      scenario.weather = exl::sim::parse_sim_weather(*mode);
    }
    if (auto dir = opt<std::string>(cfg, "weather_fixture_dir")) {
      scenario.weather_fixture_dir = *dir;
    } else if (scenario.weather_fixture_dir.empty()) {
      scenario.weather_fixture_dir = data_dir / "weather";
    }

    exl::capture::CaptureConfig cc;
    if (auto id = opt<std::string>(cfg, "device_id")) cc.device_id = *id;
    if (auto f = opt<exl::TimestampMs>(cfg, "freshness_ms")) {
      require(*f > 0, "freshness_ms must be positive");
      cc.freshness_window_ms = *f;
    }
    cc.log_path = path_or(cfg, "log_path", {});
    auto registry = scenario.registry;

    handle->feed = std::make_unique<exl::sim::LiveSensorFeed>(std::move(scenario), handle->cells,
                                                              handle->clock);
    handle->feed->start(std::chrono::milliseconds(opt<int>(cfg, "feed_period_ms").value_or(1000)));
    handle->service = std::make_unique<exl::capture::CaptureService>(
        handle->clock, handle->cells, *handle->link, std::move(registry), std::move(cc));
    handle->service->start_background_sync(
        std::chrono::milliseconds(opt<int>(cfg, "sync_period_ms").value_or(1000)));
    *out = handle.release();
  });
}

void exl_capture_close(exl_capture* capture) {
  if (!capture) return;
  if (capture->server) capture->server->stop();
  capture->service->stop_background_sync();
  capture->feed->stop();
  delete capture;
}

exl_status exl_capture_start_session(exl_capture* capture, const char* location_label,
                                     char** session_json) {
  return guarded([&] {
    require(capture, "capture is required");
    auto s = capture->service->start_session(
        location_label ? std::optional<std::string>(location_label) : std::nullopt);
    if (session_json) *session_json = dup_string(exl::capture::encode_session(s).dump());
  });
}

exl_status exl_capture_end_session(exl_capture* capture, char** session_json) {
  return guarded([&] {
    require(capture, "capture is required");
    auto s = capture->service->end_session();
    if (session_json) *session_json = dup_string(exl::capture::encode_session(s).dump());
  });
}

exl_status exl_capture_click(exl_capture* capture, const char* behavior_name,
                             const char* category_name, char** record_json) {
  return guarded([&] {
    require(capture && behavior_name, "capture and behavior_name are required");
    auto record = capture->service->record_behavior(
        {}, behavior_name,
        category_name ? std::optional<std::string_view>(category_name) : std::nullopt);
    if (record_json) *record_json = dup_string(exl::core::record_line(record));
  });
}

exl_status exl_capture_drain(exl_capture* capture, size_t* acked) {
  return guarded([&] {
    require(capture, "capture is required");
    const auto n = capture->service->drain();
    if (acked) *acked = n;
  });
}

exl_status exl_capture_export_log(exl_capture* capture, const char* session_id, char** ndjson) {
  return guarded([&] {
    require(capture && session_id && ndjson, "capture, session_id and output are required");
    *ndjson = dup_string(capture->service->export_log(session_id));
  });
}

exl_status exl_capture_status(exl_capture* capture, char** status_json) {
  return guarded([&] {
    require(capture && status_json, "capture and output are required");
    *status_json = dup_string(exl::capture::encode_status(capture->service->status()).dump());
  });
}

exl_status exl_capture_serve(exl_capture* capture, const char* host, int port, int* bound_port) {
  return guarded([&] {
    require(capture, "capture is required");
    if (capture->server) throw Error(ErrorCode::kState, "capture is already serving");
    auto server = std::make_unique<exl::capture::CaptureHttpServer>(*capture->service);
    const int bound = server->start(host ? host : "127.0.0.1", port);
    capture->server = std::move(server);
    if (bound_port) *bound_port = bound;
  });
}

exl_status exl_capture_stop(exl_capture* capture) {
  return guarded([&] {
    require(capture, "capture is required");
    if (capture->server) capture->server->stop();
    capture->server.reset();
  });
}

exl_status exl_simulate(const char* scenario_path, const char* options_json, char** summary_json) {
  return guarded([&] {
    require(scenario_path && *scenario_path, "scenario path is required");
    const Json o = parse_json_arg(options_json, "options");
    exl::sim::SimulationOptions options;
    options.seed = opt<std::uint64_t>(o, "seed");
    options.freshness_window_ms = opt<exl::TimestampMs>(o, "freshness_ms");
    if (options.freshness_window_ms) require(*options.freshness_window_ms > 0, "freshness_ms must be positive");
    if (auto mode = opt<std::string>(o, "weather_mode")) options.weather = exl::sim::parse_sim_weather(*mode);
    options.store_url = opt<std::string>(o, "store_url");
    options.out_dir = path_or(o, "out_dir", {});
    auto scenario = exl::sim::load_scenario(scenario_path);
    const auto result = exl::sim::run_simulation(scenario, options);
    if (options.seed) scenario.seed = *options.seed;
    if (summary_json) {
      *summary_json = dup_string(exl::sim::loss_summary_json(result, scenario).dump(2));
    }
  });
}

exl_status exl_report(const char* which, const char* inputs_json, const char* out_dir,
                      char** report_json, char** report_text) {
  return guarded([&] {
    require(which, "report kind is required");
    const Json in = parse_json_arg(inputs_json, "inputs");
    const auto fixtures = std::filesystem::path(EXL_DATA_DIR) / "fixtures";
    const std::string kind = which;
    Json doc;
    std::string text;
    if (kind == "alignment") {
      const auto dir = fixtures / "alignment";
      const auto tol = opt<exl::TimestampMs>(in, "tolerance_ms")
                           .value_or(exl::analysis::kDefaultAlignmentToleranceMs);
      const auto cmp = exl::analysis::compare_alignment(
          opt<std::string>(in, "first_name").value_or("app"),
          exl::analysis::read_candidates(path_or(in, "first", dir / "app_log.jsonl")),
          opt<std::string>(in, "second_name").value_or("manual"),
          exl::analysis::read_candidates(path_or(in, "second", dir / "manual_log.jsonl")),
          exl::analysis::read_reference(path_or(in, "reference", dir / "reference.jsonl")), tol);
      doc = exl::analysis::to_json(cmp);
      text = exl::analysis::render_text(cmp);
    } else if (kind == "completeness") {
      auto records = exl::core::read_records(
          path_or(in, "records", fixtures / "completeness" / "records.jsonl"));
      const auto filtered = exl::analysis::drop_empty_records(std::move(records));
      const auto audit = exl::analysis::completeness_audit(filtered.kept);
      doc = exl::analysis::to_json(audit, filtered.dropped);
      text = exl::analysis::render_text(audit, filtered.dropped);
    } else if (kind == "kappa") {
      const auto dir = fixtures / "scores";
      const auto report = exl::analysis::kappa_report(
          exl::core::read_score_sheet(path_or(in, "rater1", dir / "rater1.jsonl")),
          exl::core::read_score_sheet(path_or(in, "rater2", dir / "rater2.jsonl")));
      doc = exl::analysis::to_json(report);
      text = exl::analysis::render_text(report);
    } else if (kind == "frequency") {
      const auto dir = fixtures / "scores";
      exl::core::RaterScoreSheet sheet("consensus");
      if (auto consensus = opt<std::string>(in, "consensus")) {
        sheet = exl::core::read_score_sheet(*consensus);
      } else {
        std::map<std::string, exl::core::MovementCounts, std::less<>> resolutions;
        for (auto& e : exl::core::read_score_entries(
                 path_or(in, "resolutions", dir / "resolutions.jsonl"))) {
          resolutions.emplace(std::move(e.event_id), e.counts);
        }
        sheet = exl::analysis::consensus_merge(
            exl::core::read_score_sheet(path_or(in, "rater1", dir / "rater1.jsonl")),
            exl::core::read_score_sheet(path_or(in, "rater2", dir / "rater2.jsonl")), resolutions);
      }
      const auto table = exl::analysis::frequency_table(sheet);
      doc = exl::analysis::to_json(table);
      text = exl::analysis::render_text(table);
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown report '" + kind + "' (alignment, completeness, kappa, frequency)");
    }
    if (out_dir && *out_dir) {
      const std::filesystem::path dir(out_dir);
      exl::core::write_text_file(dir / (kind + ".json"), doc.dump(2) + "\n");
      exl::core::write_text_file(dir / (kind + ".txt"), text);
    }
    if (report_json) *report_json = dup_string(doc.dump(2));
    if (report_text) *report_text = dup_string(text);
  });
}

exl_status exl_reproduce(const char* data_dir, char** summary_json, char** summary_text) {
  bool passed = true;
  exl_status status = guarded([&] {
    const auto checks = exl::sim::run_reproduction(data_dir_or_default(data_dir));
    passed = exl::sim::all_passed(checks);
    if (summary_json) *summary_json = dup_string(exl::sim::checks_json(checks).dump(2));
    if (summary_text) *summary_text = dup_string(exl::sim::render_checks(checks));
  });
  if (status == EXL_OK && !passed) return fail(EXL_ERR_CHECK_FAILED, "reproduction checks failed");
  return status;
}

exl_status exl_generate_fixtures(const char* data_dir, uint64_t seed) {
  return guarded([&] { exl::sim::write_fixtures(data_dir_or_default(data_dir), seed); });
}

}  // extern "C"
