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

#include "capture/store_client.hpp"

#include <mutex>

#include <httplib.h>

#include "core/codec.hpp"
#include "core/error.hpp"

namespace exl::capture {

DeliveryResult LocalStoreLink::deliver(const core::DataRecord& record) {
  ++deliveries_;
  if (!reachable_.load()) return {DeliveryOutcome::kUnreachable, std::nullopt, "store offline"};
  try {
    auto ack = store_.put_record(record);
    if (drop_acks_.load()) return {DeliveryOutcome::kUnreachable, std::nullopt, "ack lost"};
    return {DeliveryOutcome::kAcked, std::move(ack), {}};
  } catch (const SchemaError& e) {
    return {DeliveryOutcome::kRejected, std::nullopt, e.what()};
  } catch (const Error& e) {
    return {DeliveryOutcome::kServerError, std::nullopt, e.what()};
  }
}

struct HttpStoreClient::Impl {
  Impl(std::string url, int timeout_s) : client(url) {
    client.set_connection_timeout(timeout_s, 0);
    client.set_read_timeout(timeout_s, 0);
    client.set_write_timeout(timeout_s, 0);
  }
  std::mutex mu;
  httplib::Client client;
};

HttpStoreClient::HttpStoreClient(std::string base_url, int timeout_s)
    : impl_(std::make_unique<Impl>(std::move(base_url), timeout_s)) {}

HttpStoreClient::~HttpStoreClient() = default;

DeliveryResult HttpStoreClient::deliver(const core::DataRecord& record) {
  std::lock_guard lock(impl_->mu);
  auto res = impl_->client.Post("/records", core::record_line(record), "application/json");
  if (!res) return {DeliveryOutcome::kUnreachable, std::nullopt, httplib::to_string(res.error())};
  if (res->status == 200) {
    try {
      return {DeliveryOutcome::kAcked, store::decode_ack(core::Json::parse(res->body)), {}};
    } catch (const std::exception& e) {
      return {DeliveryOutcome::kServerError, std::nullopt,
              std::string("unreadable ack: ") + e.what()};
    }
  }
  if (res->status >= 400 && res->status < 500) {
    return {DeliveryOutcome::kRejected, std::nullopt, res->body};
  }
  return {DeliveryOutcome::kServerError, std::nullopt,
          "HTTP " + std::to_string(res->status) + ": " + res->body};
}

}  // namespace exl::capture
