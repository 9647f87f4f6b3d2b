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

#include "capture/capture_http.hpp"

#include <thread>

#include <httplib.h>

#include "core/error.hpp"

namespace exl::capture {

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kNdjson = "application/x-ndjson";

int http_status(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kInvalidArgument: return 422;
    case ErrorCode::kParse: return 400;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kDuplicate:
    case ErrorCode::kState: return 409;
    case ErrorCode::kUnavailable: return 503;
    default: return 500;
  }
}

void reply_error(httplib::Response& res, const Error& e) {
  core::Json j = core::Json::object();
  j["error"] = std::string(error_code_name(e.code()));
  j["message"] = e.what();
  if (const auto* schema = dynamic_cast<const SchemaError*>(&e)) {
    j["diagnostics"] = schema->diagnostics();
  }
  if (const auto* dup = dynamic_cast<const core::DuplicateBehaviorError*>(&e)) {
    j["existing"] = core::encode_definition(dup->existing());
  }
  res.status = http_status(e);
  res.set_content(j.dump(), kJson);
}

core::Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return core::Json::object();
  try {
    return core::Json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("request body is not JSON: ") + e.what());
  }
}

std::optional<std::string> optional_string(const core::Json& body, const char* key) {
  if (!body.is_object()) throw Error(ErrorCode::kParse, "request body must be an object");
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(key) + " must be a string");
  }
  return it->get<std::string>();
}

// Runs a handler and turns library errors into JSON error replies.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      reply_error(res, e);
    } catch (const std::exception& e) {
      reply_error(res, Error(ErrorCode::kInternal, e.what()));
    }
  };
}

}  // namespace

core::Json encode_session(const Session& s) {
  core::Json j = core::Json::object();
  j["session_id"] = s.session_id;
  j["started_at"] = s.started_at;
  j["ended_at"] = s.ended_at ? core::Json(*s.ended_at) : core::Json(nullptr);
  j["registry_revision"] = s.registry_revision;
  j["location_label"] = s.location_label ? core::Json(*s.location_label) : core::Json(nullptr);
  j["open"] = s.open();
  return j;
}

core::Json encode_status(const CaptureStatus& st) {
  core::Json j = core::Json::object();
  j["now"] = st.now;
  j["freshness_window_ms"] = st.freshness_window_ms;
  core::Json sources = core::Json::array();
  for (const auto& s : st.sources) {
    core::Json o = core::Json::object();
    o["source"] = std::string(core::source_name(s.source));
    o["age_ms"] = s.age_ms ? core::Json(*s.age_ms) : core::Json(nullptr);
    o["fresh"] = s.fresh;
    sources.push_back(std::move(o));
  }
  j["sources"] = std::move(sources);
  if (st.nearest_beacon) {
    core::Json b = core::Json::object();
    b["uuid"] = st.nearest_beacon->uuid;
    b["beacon_name"] = st.nearest_beacon->beacon_name;
    b["rssi"] = st.nearest_beacon->rssi;
    j["nearest_beacon"] = std::move(b);
  } else {
    j["nearest_beacon"] = nullptr;
  }
  j["queue"] = {{"depth", st.queue.pending}, {"acked", st.queue.acked}, {"failed", st.queue.failed}};
  j["session"] = st.session ? encode_session(*st.session) : core::Json(nullptr);
  j["registry_revision"] = st.registry_revision;
  j["log_size"] = st.log_size;
  return j;
}

struct CaptureHttpServer::Impl {
  explicit Impl(CaptureService& s) : service(s) { install_routes(); }

  void install_routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/registry", guarded([this](const httplib::Request&, httplib::Response& res) {
      res.set_content(core::encode_registry(service.registry()).dump(), kJson);
    }));

    server.Put("/registry", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto defs = core::decode_definitions(parse_body(req));
      res.set_content(core::encode_registry(service.replace_registry(defs)).dump(), kJson);
    }));

    server.Post("/registry/definitions",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  auto def = core::decode_definition(parse_body(req));
                  res.set_content(core::encode_registry(service.upsert_behavior(def)).dump(),
                                  kJson);
                }));

    server.Post("/sessions/start",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  auto label = optional_string(parse_body(req), "location_label");
                  res.set_content(encode_session(service.start_session(label)).dump(), kJson);
                }));

    server.Post("/sessions/end", guarded([this](const httplib::Request&, httplib::Response& res) {
      res.set_content(encode_session(service.end_session()).dump(), kJson);
    }));

    server.Get("/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
      core::Json list = core::Json::array();
      for (const auto& s : service.sessions()) list.push_back(encode_session(s));
      res.set_content(list.dump(), kJson);
    }));

    server.Post("/clicks", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      auto behavior = optional_string(body, "behavior_name");
      if (!behavior || behavior->empty()) {
        throw Error(ErrorCode::kInvalidArgument, "behavior_name is required");
      }
      auto category = optional_string(body, "category_name");
      auto session = optional_string(body, "session_id").value_or("");
      auto record = service.record_behavior(
          session, *behavior,
          category ? std::optional<std::string_view>(*category) : std::nullopt);
      core::Json j = core::Json::object();
      j["record"] = core::encode_record(record);
      j["values"] = record.value_count();
      j["errors"] = record.error_count();
      j["sync"] = "pending";
      for (const auto& e : service.queue().entries()) {
        if (e.record.event_id == record.event_id) j["sync"] = std::string(entry_state_name(e.state));
      }
      res.set_content(j.dump(), kJson);
    }));

    server.Get(R"(/sessions/([^/]+)/log)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 res.set_content(service.export_log(req.matches[1].str()), kNdjson);
               }));

    server.Get("/queue", guarded([this](const httplib::Request&, httplib::Response& res) {
      core::Json list = core::Json::array();
      for (const auto& e : service.queue().entries()) {
        core::Json o = core::Json::object();
        o["event_id"] = e.record.event_id;
        o["state"] = std::string(entry_state_name(e.state));
        o["attempts"] = e.attempts;
        o["sequence"] = e.ack ? core::Json(e.ack->sequence) : core::Json(nullptr);
        o["last_error"] = e.last_error;
        list.push_back(std::move(o));
      }
      res.set_content(list.dump(), kJson);
    }));

    server.Get("/status", guarded([this](const httplib::Request&, httplib::Response& res) {
      res.set_content(encode_status(service.status()).dump(), kJson);
    }));
  }

  CaptureService& service;
  httplib::Server server;
  std::thread thread;
};

CaptureHttpServer::CaptureHttpServer(CaptureService& service)
    : impl_(std::make_unique<Impl>(service)) {}

CaptureHttpServer::~CaptureHttpServer() { stop(); }

int CaptureHttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::kIo, "cannot bind capture server to " + host);
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void CaptureHttpServer::run(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw Error(ErrorCode::kIo, "cannot serve capture API on " + host + ":" + std::to_string(port));
  }
}

void CaptureHttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace exl::capture
