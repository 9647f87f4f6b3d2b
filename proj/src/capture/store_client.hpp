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

#include <atomic>
#include <memory>
#include <optional>
#include <string>

#include "core/model.hpp"
#include "store/record_store.hpp"

namespace exl::capture {

enum class DeliveryOutcome {
  kAcked,
  kRejected,     // store answered and refused the record
  kServerError,  // store answered with a transient failure
  kUnreachable,  // nothing was delivered
};

struct DeliveryResult {
  DeliveryOutcome outcome = DeliveryOutcome::kUnreachable;
  std::optional<store::Ack> ack;
  std::string detail;
};

class StoreClient {
 public:
  virtual ~StoreClient() = default;
  virtual DeliveryResult deliver(const core::DataRecord& record) = 0;
};

// In-process link to a RecordStore with switches for fault injection.
class LocalStoreLink final : public StoreClient {
 public:
  explicit LocalStoreLink(store::RecordStore& store) : store_(store) {}

  DeliveryResult deliver(const core::DataRecord& record) override;

  void set_reachable(bool reachable) { reachable_.store(reachable); }
  // The store persists the record but the ack never arrives.
  void set_drop_acks(bool drop) { drop_acks_.store(drop); }
  bool reachable() const { return reachable_.load(); }
  std::size_t deliveries() const { return deliveries_.load(); }

 private:
  store::RecordStore& store_;
  std::atomic<bool> reachable_{true};
  std::atomic<bool> drop_acks_{false};
  std::atomic<std::size_t> deliveries_{0};
};

// POSTs records to a store's HTTP endpoint.
class HttpStoreClient final : public StoreClient {
 public:
  // base_url like "http://127.0.0.1:8700".
  explicit HttpStoreClient(std::string base_url, int timeout_s = 3);
  ~HttpStoreClient() override;

  DeliveryResult deliver(const core::DataRecord& record) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace exl::capture
