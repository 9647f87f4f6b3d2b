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

#include <memory>
#include <string>

#include "capture/capture_service.hpp"
#include "core/codec.hpp"

namespace exl::capture {

core::Json encode_session(const Session& session);
core::Json encode_status(const CaptureStatus& status);

// HTTP API used by the browser client. Every response allows any origin.
//   GET  /registry                       {revision, definitions}
//   PUT  /registry                       replace all definitions
//   POST /registry/definitions           add one definition
//   POST /sessions/start                 {location_label?}
//   POST /sessions/end
//   GET  /sessions
//   POST /clicks                         {behavior_name, category_name?, session_id?}
//   GET  /sessions/{id}/log              exported event log (NDJSON)
//   GET  /queue                          per-event sync state
//   GET  /status                         source ages, nearest beacon, queue depth
class CaptureHttpServer {
 public:
  explicit CaptureHttpServer(CaptureService& service);
  ~CaptureHttpServer();

  CaptureHttpServer(const CaptureHttpServer&) = delete;
  CaptureHttpServer& operator=(const CaptureHttpServer&) = delete;

  int start(const std::string& host, int port);
  void run(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace exl::capture
