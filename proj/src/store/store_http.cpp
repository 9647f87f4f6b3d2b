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

#include "store/store_http.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <thread>

#include <httplib.h>

#include "core/error.hpp"

namespace exl::store {

namespace {

constexpr const char* kNdjson = "application/x-ndjson";
constexpr const char* kJson = "application/json";
constexpr long kMaxFeedWaitMs = 30'000;

std::optional<std::int64_t> int_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string v = req.get_param_value(name);
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("query parameter '") + name +
                                                 "' is not an integer: " + v);
  }
  return out;
}

void reply_error(httplib::Response& res, int status, std::string_view kind,
                 const std::string& message, const std::vector<std::string>& diagnostics = {}) {
  core::Json j = core::Json::object();
  j["error"] = std::string(kind);
  j["message"] = message;
  if (!diagnostics.empty()) j["diagnostics"] = diagnostics;
  res.status = status;
  res.set_content(j.dump(), kJson);
}

std::string ndjson(const std::vector<StoredRecord>& records) {
  std::string body;
  for (const auto& r : records) {
    body += encode_stored(r).dump();
    body += '\n';
  }
  return body;
}

}  // namespace

struct StoreHttpServer::Impl {
  explicit Impl(RecordStore& s) : store(s) { install_routes(); }

  void install_routes() {
    server.Post("/records", [this](const httplib::Request& req, httplib::Response& res) {
      core::Json body;
      try {
        body = core::Json::parse(req.body);
      } catch (const nlohmann::json::parse_error& e) {
        reply_error(res, 400, "parse", e.what());
        return;
      }
      try {
        res.set_content(encode_ack(store.put_json(body)).dump(), kJson);
      } catch (const SchemaError& e) {
        reply_error(res, 422, "schema", e.what(), e.diagnostics());
      } catch (const Error& e) {
        reply_error(res, 500, error_code_name(e.code()), e.what());
      }
    });

    server.Get("/records", [this](const httplib::Request& req, httplib::Response& res) {
      RecordFilter filter;
      try {
        if (req.has_param("session_id")) filter.session_id = req.get_param_value("session_id");
        if (req.has_param("behavior_name"))
          filter.behavior_name = req.get_param_value("behavior_name");
        filter.from_ms = int_param(req, "from");
        filter.to_ms = int_param(req, "to");
      } catch (const Error& e) {
        reply_error(res, 400, "bad-request", e.what());
        return;
      }
      res.set_content(ndjson(store.query(filter)), kNdjson);
    });

    server.Get("/feed", [this](const httplib::Request& req, httplib::Response& res) {
      std::int64_t from = 0;
      std::int64_t wait_ms = 0;
      try {
        from = int_param(req, "from_sequence").value_or(0);
        wait_ms = int_param(req, "timeout_ms").value_or(0);
      } catch (const Error& e) {
        reply_error(res, 400, "bad-request", e.what());
        return;
      }
      if (from < 0) {
        reply_error(res, 400, "bad-request", "from_sequence must be >= 0");
        return;
      }
      wait_ms = std::clamp<std::int64_t>(wait_ms, 0, kMaxFeedWaitMs);
      // Wait in short slices.
      ChangeFeed feed(store, static_cast<std::uint64_t>(from));
      const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(wait_ms);
      auto batch = feed.poll(std::chrono::milliseconds(0));
      while (batch.empty() && !stopping.load() && std::chrono::steady_clock::now() < deadline) {
        batch = feed.poll(std::chrono::milliseconds(100));
      }
      res.set_content(ndjson(batch), kNdjson);
    });

    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      core::Json j = core::Json::object();
      j["status"] = "ok";
      j["count"] = store.size();
      j["latest_sequence"] = store.latest_sequence();
      res.set_content(j.dump(), kJson);
    });
  }

  RecordStore& store;
  std::atomic<bool> stopping{false};
  httplib::Server server;
  std::thread thread;
};

StoreHttpServer::StoreHttpServer(RecordStore& store) : impl_(std::make_unique<Impl>(store)) {}

StoreHttpServer::~StoreHttpServer() { stop(); }

int StoreHttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind store server to " + host);
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void StoreHttpServer::run(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw Error(ErrorCode::kIo, "cannot serve store on " + host + ":" + std::to_string(port));
  }
}

void StoreHttpServer::stop() {
  impl_->stopping.store(true);
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace exl::store
