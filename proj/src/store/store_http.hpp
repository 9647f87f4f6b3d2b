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

#include "store/record_store.hpp"

namespace exl::store {

// HTTP face of the record store:
//   POST /records                 one record object -> ack, 422 with diagnostics
//   GET  /records?session_id=&behavior_name=&from=&to=   NDJSON of stored records
//   GET  /feed?from_sequence=N&timeout_ms=T              long-poll NDJSON
//   GET  /health
class StoreHttpServer {
 public:
  explicit StoreHttpServer(RecordStore& store);
  ~StoreHttpServer();

  StoreHttpServer(const StoreHttpServer&) = delete;
  StoreHttpServer& operator=(const StoreHttpServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  // Returns the bound port.
  int start(const std::string& host, int port);
  // Binds and serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace exl::store
